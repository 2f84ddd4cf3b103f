//! Discounted CRRA welfare and the transversality residual.

use alloc::vec::Vec;

use super::{RamseyParams, Trajectory};
use crate::math::{exp, expm1, ln, powf};

/// `u(c) = (c^(1 - 1/sigma) - 1) / (1 - 1/sigma)`, or `ln c` at `sigma = 1`.
pub fn utility(sigma: f64, c: f64) -> f64 {
    if sigma == 1.0 {
        return ln(c);
    }
    let e = 1.0 - 1.0 / sigma;
    if c > 0.0 {
        expm1(e * ln(c)) / e
    } else {
        (powf(c, e) - 1.0) / e
    }
}

/// Finite-horizon welfare. A zero-consumption sample with `sigma <= 1`
/// makes utility minus infinity; `value` is then `-inf` and
/// `zero_consumption_at` names the first such time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Welfare {
    pub value: f64,
    pub zero_consumption_at: Option<f64>,
}

/// Trapezoid rule for `int e^(-rho t) u(c(t)) dt` over the samples.
pub fn welfare(rp: &RamseyParams, trajectory: &Trajectory) -> Welfare {
    let samples = &trajectory.samples;
    if rp.sigma <= 1.0 {
        if let Some(s) = samples.iter().find(|s| s.c <= 0.0) {
            return Welfare {
                value: f64::NEG_INFINITY,
                zero_consumption_at: Some(s.t),
            };
        }
    }
    let integrand = |t: f64, c: f64| exp(-rp.rho * t) * utility(rp.sigma, c.max(0.0));
    let value = samples
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (integrand(w[0].t, w[0].c) + integrand(w[1].t, w[1].c)))
        .sum();
    Welfare {
        value,
        zero_consumption_at: None,
    }
}

/// `e^(-rho t) c^(-1/sigma) k` per sample, evaluated in log space. Zero
/// wherever `k = 0`.
pub fn transversality_residual(rp: &RamseyParams, trajectory: &Trajectory) -> Vec<f64> {
    trajectory
        .samples
        .iter()
        .map(|s| {
            if s.k == 0.0 {
                0.0
            } else {
                exp(-rp.rho * s.t - ln(s.c) / rp.sigma + ln(s.k))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{EconomyState, Termination};
    use alloc::vec;

    fn constant_path(c: f64, k: f64, t_end: f64, n: usize) -> Trajectory {
        Trajectory {
            samples: (0..=n)
                .map(|i| EconomyState::new(t_end * i as f64 / n as f64, k, c, 1.0))
                .collect(),
            termination: Termination::Completed,
            segments: vec![],
        }
    }

    #[test]
    fn unit_consumption_has_zero_welfare() {
        for sigma in [0.01, 0.5, 2.0] {
            let rp = RamseyParams::new(0.02, 0.075, sigma).unwrap();
            assert_eq!(welfare(&rp, &constant_path(1.0, 1.0, 100.0, 50)).value, 0.0);
        }
    }

    #[test]
    fn constant_consumption_matches_closed_form() {
        let rp = RamseyParams::new(0.05, 0.075, 0.5).unwrap();
        let (c, t_end) = (1.7, 80.0);
        let w = welfare(&rp, &constant_path(c, 1.0, t_end, 20_000)).value;
        let exact = utility(0.5, c) * (1.0 - exp(-0.05 * t_end)) / 0.05;
        assert!((w - exact).abs() < 1e-6 * exact.abs(), "{w} vs {exact}");
    }

    #[test]
    fn log_utility_limit() {
        let rp = RamseyParams::new(0.05, 0.075, 1.0).unwrap();
        let t_end = 40.0;
        let w = welfare(&rp, &constant_path(core::f64::consts::E, 1.0, t_end, 20_000)).value;
        let exact = (1.0 - exp(-0.05 * t_end)) / 0.05;
        assert!((w - exact).abs() < 1e-6 * exact);
        // sigma -> 1 approaches ln c continuously
        assert!((utility(1.0 + 1e-9, 2.0) - ln(2.0)).abs() < 1e-8);
    }

    #[test]
    fn zero_consumption_with_low_elasticity_is_minus_infinity() {
        let rp = RamseyParams::new(0.05, 0.075, 0.5).unwrap();
        let w = welfare(&rp, &constant_path(0.0, 1.0, 10.0, 10));
        assert_eq!(w.value, f64::NEG_INFINITY);
        assert_eq!(w.zero_consumption_at, Some(0.0));
        let rp2 = RamseyParams::new(0.05, 0.075, 2.0).unwrap();
        assert!(welfare(&rp2, &constant_path(0.0, 1.0, 10.0, 10)).value.is_finite());
    }

    #[test]
    fn residual_vanishes_for_zero_capital_and_decays_at_steady_state() {
        let rp = RamseyParams::new(0.02, 0.075, 0.5).unwrap();
        assert!(transversality_residual(&rp, &constant_path(1.0, 0.0, 10.0, 5)).iter().all(|&r| r == 0.0));
        let res = transversality_residual(&rp, &constant_path(1.3, 5.0, 2500.0, 100));
        assert!(res.last().unwrap() < &(1e-3 * res[0]));
    }
}
