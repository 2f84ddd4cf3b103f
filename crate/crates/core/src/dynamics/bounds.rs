//! Comparison bounds for capital and consumption.
//!
//! Capital is squeezed between the pure-depreciation path
//! `k1(t) = k0 exp(-int_0^t (delta + n))` and the Solow path
//! `k2' = f(k2) - (delta + n(t)) k2`. Consumption is bounded above by output
//! on the Solow path and below by an exponential in the marginal-product
//! bound `B`.

use alloc::vec::Vec;

use super::{EconomyState, RamseyParams, Trajectory};
use crate::error::{Error, Result};
use crate::math::{exp, powf};
use crate::ode::{self, Control, Options, Outcome};
use crate::population::{self, AlleeParams};
use crate::production::ProductionSpec;
use crate::steadystate;

/// Panel width for the trapezoid quadrature of the growth rate.
const QUADRATURE_PANEL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapitalBound {
    pub k_lower: f64,
    pub k_upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsumptionBound {
    pub c_lower: f64,
    pub c_upper: f64,
}

/// Everything derived per sample for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedSample {
    pub n: f64,
    /// `c / k`.
    pub x: f64,
    /// `k / f(k)`.
    pub z: f64,
    pub k_lower: f64,
    pub k_upper: f64,
    pub c_lower: f64,
    pub c_upper: f64,
    /// `1 - c / f(k)`.
    pub savings_rate: f64,
}

/// Capital bounds at each time of `t_grid` (non-decreasing, starting at or
/// after zero) for a path started at `k0` with labour `ap.l0`.
pub fn capital_bounds(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    k0: f64,
    t_grid: &[f64],
    opts: &Options,
) -> Result<Vec<CapitalBound>> {
    spec.validate()?;
    rp.validate()?;
    ap.validate()?;
    if !(k0 > 0.0) {
        return Err(Error::Domain {
            what: "initial capital for bounds",
            value: k0,
        });
    }
    if t_grid.windows(2).any(|w| w[1] < w[0]) || t_grid.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::Domain {
            what: "bound time grid (must be sorted and non-negative)",
            value: t_grid.first().copied().unwrap_or(f64::NAN),
        });
    }
    let t_max = t_grid.last().copied().unwrap_or(0.0);

    let pop_opts = Options {
        rtol: opts.rtol.min(1e-9),
        atol: opts.atol.min(1e-12),
        ..*opts
    };
    let path = population::integrate_population(ap, t_max, &pop_opts)?;
    let growth_integral = path.integrated_growth(t_grid, QUADRATURE_PANEL);

    let solow = ode::integrate(
        |_, y: &[f64; 2]| {
            let n = ap.rate(y[1]);
            [spec.f(y[0].max(0.0)) - (rp.delta + n) * y[0], y[1] * n]
        },
        0.0,
        [k0, ap.l0],
        t_max,
        opts,
        |_| Control::Continue,
    );
    if let Outcome::Failed(kind) = solow.outcome {
        return Err(Error::Integration {
            t: solow.t_last(),
            kind,
        });
    }

    Ok(t_grid
        .iter()
        .zip(&growth_integral)
        .map(|(&t, &int_n)| CapitalBound {
            k_lower: k0 * exp(-rp.delta * t - int_n),
            k_upper: solow.eval(t).map(|y| y[0]).unwrap_or(f64::NAN),
        })
        .collect())
}

/// Marginal-product bound used in the consumption lower bound:
/// `f'(k*_{n_inf})` when `k0 < k*_{n_inf}`, otherwise `f'(k0)`.
pub(crate) fn marginal_bound(spec: &ProductionSpec, rp: &RamseyParams, ap: &AlleeParams, k0: f64) -> f64 {
    let n_inf = ap.classify_regime().n_infinity;
    match steadystate::solow_equilibrium(spec, rp.delta, n_inf) {
        Ok(k_star) if k0 < k_star => spec.df(k_star),
        Ok(_) => spec.df(k0),
        // No finite equilibrium: capital is unbounded, the infimum of f'
        // over the path is its limit at infinity.
        Err(Error::Unstable { .. }) => spec.marginal_product_at_infinity(),
        // Only the trivial root: every k0 > 0 lies above it.
        Err(_) => spec.df(k0),
    }
}

/// Consumption bounds along `trajectory`, given the capital bounds at its
/// sample times.
pub fn consumption_bounds(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    trajectory: &Trajectory,
    capital: &[CapitalBound],
) -> Result<Vec<ConsumptionBound>> {
    if capital.len() != trajectory.len() {
        return Err(Error::Domain {
            what: "capital bound count (must match trajectory samples)",
            value: capital.len() as f64,
        });
    }
    let first = trajectory.first();
    let (c0, k0, l0) = (first.c, first.k, first.l);
    let t0 = first.t;
    let b = marginal_bound(spec, rp, ap, k0);
    let rate = rp.sigma * (b - rp.delta - rp.rho);
    Ok(trajectory
        .samples
        .iter()
        .zip(capital)
        .map(|(s, cb)| ConsumptionBound {
            c_lower: if c0 == 0.0 {
                0.0
            } else {
                c0 * exp(rate * (s.t - t0)) * powf(l0 / s.l, rp.sigma)
            },
            c_upper: spec.f(cb.k_upper.max(0.0)),
        })
        .collect())
}

/// Counts of bound violations along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SandwichReport {
    /// Samples with `k < k_lower - eps` or `k > k_upper + eps`,
    /// `eps = 1e-6 (1 + k_upper)`.
    pub capital: usize,
    /// Samples with `c > c_upper + eps`, same `eps`.
    pub consumption_upper: usize,
}

pub fn sandwich_violations(trajectory: &Trajectory, derived: &[DerivedSample]) -> SandwichReport {
    let mut report = SandwichReport::default();
    for (s, d) in trajectory.samples.iter().zip(derived) {
        let eps = 1e-6 * (1.0 + d.k_upper);
        if s.k < d.k_lower - eps || s.k > d.k_upper + eps {
            report.capital += 1;
        }
        if s.c > d.c_upper + eps {
            report.consumption_upper += 1;
        }
    }
    report
}

/// Computes every derived column for the samples of `trajectory`.
pub fn annotate(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    trajectory: &Trajectory,
    opts: &Options,
) -> Result<Vec<DerivedSample>> {
    let first: &EconomyState = trajectory.first();
    let ap = ap.with_l0(first.l);
    let t0 = first.t;
    let grid: Vec<f64> = trajectory.samples.iter().map(|s| s.t - t0).collect();
    let capital = capital_bounds(spec, rp, &ap, first.k, &grid, opts)?;
    let consumption = consumption_bounds(spec, rp, &ap, trajectory, &capital)?;
    Ok(trajectory
        .samples
        .iter()
        .zip(capital.iter().zip(&consumption))
        .map(|(s, (cb, ob))| {
            let y = spec.f(s.k.max(0.0));
            DerivedSample {
                n: ap.rate(s.l),
                x: s.c / s.k,
                z: s.k / y,
                k_lower: cb.k_lower,
                k_upper: cb.k_upper,
                c_lower: ob.c_lower,
                c_upper: ob.c_upper,
                savings_rate: 1.0 - s.c / y,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{default_options, integrate_full};
    use crate::math::{abs, ln};

    #[test]
    fn lower_bound_is_pure_depreciation_when_labour_is_fixed() {
        let spec = ProductionSpec::Log;
        let rp = RamseyParams::new(0.02, 0.075, 0.5).unwrap();
        let ap = AlleeParams::new(0.025, 1.0, 2.0, 1.0).unwrap();
        let grid: Vec<f64> = (0..=40).map(|i| 5.0 * i as f64).collect();
        let b = capital_bounds(&spec, &rp, &ap, 2.0, &grid, &default_options()).unwrap();
        for (t, cb) in grid.iter().zip(&b) {
            assert_eq!(cb.k_lower, 2.0 * exp(-0.075 * t));
        }
    }

    #[test]
    fn lower_bound_decays_to_zero_when_stable() {
        let spec = ProductionSpec::Ces { alpha: 0.3, tau: 0.01 };
        let rp = RamseyParams::new(0.02, 0.075, 0.01).unwrap();
        for l0 in [0.5, 1.5, 3.0] {
            let ap = AlleeParams::new(0.025, 1.0, 2.0, l0).unwrap();
            let b = capital_bounds(&spec, &rp, &ap, 5.0, &[0.0, 1000.0, 2000.0], &default_options()).unwrap();
            assert_eq!(b[0].k_lower, 5.0);
            assert!(b[2].k_lower < 1e-30, "L0={l0}: {}", b[2].k_lower);
            assert!(b[2].k_lower < b[1].k_lower);
        }
    }

    #[test]
    fn lower_bound_matches_log_labour_closed_form() {
        let spec = ProductionSpec::Log;
        let rp = RamseyParams::new(0.02, 0.075, 0.5).unwrap();
        let ap = AlleeParams::new(0.025, 1.0, 2.0, 0.6).unwrap();
        let grid = [0.0, 13.0, 250.0, 900.0];
        let b = capital_bounds(&spec, &rp, &ap, 3.0, &grid, &default_options()).unwrap();
        let path = population::integrate_population(&ap, 900.0, &population::default_options()).unwrap();
        for (t, cb) in grid.iter().zip(&b) {
            // int n = ln(L(t) / L0)
            let exact = 3.0 * exp(-0.075 * t - ln(path.labour_at(*t) / 0.6));
            assert!(abs(cb.k_lower / exact - 1.0) < 1e-6, "t={t}");
        }
    }

    #[test]
    fn zero_initial_consumption_has_zero_lower_bound() {
        let spec = ProductionSpec::Log;
        let rp = RamseyParams::new(0.02, 0.075, 0.5).unwrap();
        let ap = AlleeParams::new(0.025, 1.0, 2.0, 0.5).unwrap();
        let traj = integrate_full(&spec, &rp, &ap, &EconomyState::new(0.0, 1.0, 0.0, 0.5), 100.0, &default_options()).unwrap();
        let derived = annotate(&spec, &rp, &ap, &traj, &default_options()).unwrap();
        assert!(derived.iter().all(|d| d.c_lower == 0.0));
        // with c = 0 the trajectory is the Solow path itself
        for (s, d) in traj.samples.iter().zip(&derived) {
            assert!(abs(s.k - d.k_upper) < 1e-6 * (1.0 + d.k_upper));
        }
        assert_eq!(sandwich_violations(&traj, &derived), SandwichReport::default());
    }

    #[test]
    fn rejects_unsorted_grid() {
        let spec = ProductionSpec::Log;
        let rp = RamseyParams::new(0.02, 0.075, 0.5).unwrap();
        let ap = AlleeParams::new(0.025, 1.0, 2.0, 0.5).unwrap();
        assert!(capital_bounds(&spec, &rp, &ap, 1.0, &[2.0, 1.0], &default_options()).is_err());
        assert!(capital_bounds(&spec, &rp, &ap, 0.0, &[0.0], &default_options()).is_err());
    }
}
