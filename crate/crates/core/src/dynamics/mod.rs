//! The coupled capital / consumption / labour system
//!
//! ```text
//! k' = f(k) - (delta + n(L)) k - c
//! c' = sigma c (f'(k) - rho - delta - n(L))
//! L' = r L (1 - L/M)(L/N - 1)
//! ```
//!
//! together with its comparison bounds, the consumption-to-capital ratio
//! formulation, saddle-path shooting and welfare functionals.

mod bounds;
mod ratio;
mod shooting;
mod welfare;

pub use bounds::{
    annotate, capital_bounds, consumption_bounds, sandwich_violations, CapitalBound,
    ConsumptionBound, DerivedSample, SandwichReport,
};
pub use ratio::{integrate_ratio, RatioPath, RatioSample};
pub use shooting::{
    saddle_path, shoot_initial_consumption, Restart, SaddlePath, ShootingOptions,
};
pub use welfare::{transversality_residual, utility, welfare, Welfare};

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, FailureKind, Result};
use crate::ode::{self, Control, Options, Outcome, Segment, Solution};
use crate::population::AlleeParams;
use crate::production::ProductionSpec;
use crate::roots::{self, Tolerance};

/// Preference and technology scalars.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyParams {
    /// Discount rate `rho > 0`.
    pub rho: f64,
    /// Depreciation rate `delta > 0`.
    pub delta: f64,
    /// Intertemporal elasticity of substitution `sigma > 0`.
    pub sigma: f64,
}

impl RamseyParams {
    pub fn new(rho: f64, delta: f64, sigma: f64) -> Result<Self> {
        let p = RamseyParams { rho, delta, sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("economy.rho", self.rho),
            ("economy.delta", self.delta),
            ("economy.sigma", self.sigma),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    expected: "a finite positive number",
                });
            }
        }
        Ok(())
    }

    /// `delta > r`: depreciation outpaces the fastest possible population
    /// decline, so every regime has a stable Solow equilibrium.
    pub fn is_stable_for(&self, r: f64) -> bool {
        self.delta > r
    }
}

/// Time-stamped per-labour state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EconomyState {
    pub t: f64,
    pub k: f64,
    pub c: f64,
    pub l: f64,
}

impl EconomyState {
    pub fn new(t: f64, k: f64, c: f64, l: f64) -> Self {
        EconomyState { t, k, c, l }
    }

    fn as_array(&self) -> [f64; 3] {
        [self.k, self.c, self.l]
    }
}

/// Thresholds that stop an integration early.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guards {
    /// Capital above this is treated as blow-up.
    pub k_max: f64,
    /// Capital below this is treated as collapse.
    pub k_min: f64,
    /// Consumption below this ends a run that started with `c0 > 0`.
    pub c_min: f64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            k_max: 1e12,
            k_min: 1e-12,
            c_min: 1e-14,
        }
    }
}

/// Why a trajectory ends where it does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    /// Capital crossed the overflow guard at `t`.
    BlowUp { t: f64 },
    /// Capital fell through the floor at `t`.
    CapitalFloor { t: f64 },
    /// Consumption fell through the floor at `t`.
    ConsumptionFloor { t: f64 },
    Failed { t: f64, kind: FailureKind },
}

impl Termination {
    pub fn tag(&self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::BlowUp { .. } => "blow_up",
            Termination::CapitalFloor { .. } => "capital_floor",
            Termination::ConsumptionFloor { .. } => "consumption_floor",
            Termination::Failed { .. } => "integration_failure",
        }
    }

    pub fn is_completed(&self) -> bool {
        matches!(self, Termination::Completed)
    }

    pub fn time(&self) -> Option<f64> {
        match *self {
            Termination::Completed => None,
            Termination::BlowUp { t }
            | Termination::CapitalFloor { t }
            | Termination::ConsumptionFloor { t }
            | Termination::Failed { t, .. } => Some(t),
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::Completed => f.write_str("completed"),
            Termination::Failed { t, kind } => write!(f, "integration_failure at t={t}: {kind}"),
            other => write!(f, "{} at t={}", other.tag(), other.time().unwrap_or(f64::NAN)),
        }
    }
}

/// Ordered samples at the integrator's accepted steps, with dense output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<EconomyState>,
    pub termination: Termination,
    /// `segments[i]` interpolates between `samples[i]` and `samples[i + 1]`.
    segments: Vec<Segment<3>>,
}

impl Trajectory {
    pub fn first(&self) -> &EconomyState {
        &self.samples[0]
    }

    pub fn last(&self) -> &EconomyState {
        self.samples.last().expect("trajectory holds its initial state")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Interpolated state at `t`; `None` outside the covered interval.
    pub fn eval(&self, t: f64) -> Option<EconomyState> {
        let first = self.first().t;
        let last = self.last().t;
        if !(t >= first && t <= last) {
            return None;
        }
        if t == last {
            return Some(*self.last());
        }
        if self.segments.is_empty() {
            return Some(*self.first());
        }
        let idx = self.samples[1..].partition_point(|s| s.t < t);
        let y = self.segments[idx.min(self.segments.len() - 1)].eval(t);
        Some(EconomyState::new(t, y[0], y[1], y[2]))
    }

    fn from_solution(sol: Solution<3>, termination: Termination) -> Self {
        let samples = sol
            .t
            .iter()
            .zip(&sol.y)
            .map(|(&t, y)| EconomyState::new(t, y[0], y[1], y[2]))
            .collect();
        Trajectory {
            samples,
            termination,
            segments: sol.segments,
        }
    }

    /// Appends `next`, which must start where `self` ends in time. The
    /// junction sample of `self` is replaced by the first sample of `next`.
    pub(crate) fn append(&mut self, next: Trajectory) {
        debug_assert!(next.first().t == self.last().t);
        self.samples.pop();
        self.samples.extend(next.samples);
        self.segments.extend(next.segments);
        self.termination = next.termination;
    }
}

/// Right-hand side of the full system at a state with `k > 0` and `L > 0`.
pub fn rhs_full(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    state: &EconomyState,
) -> Result<[f64; 3]> {
    spec.validate()?;
    rp.validate()?;
    ap.validate()?;
    if !(state.k > 0.0) || !state.k.is_finite() {
        return Err(Error::Domain {
            what: "capital per labour",
            value: state.k,
        });
    }
    if !(state.l > 0.0) || !state.l.is_finite() {
        return Err(Error::Domain {
            what: "labour",
            value: state.l,
        });
    }
    Ok(derivatives(spec, rp, ap, state.k, state.c, state.l))
}

/// Unchecked right-hand side. Capital is clamped at zero for output and at
/// the default floor for the marginal product so that the integrator can
/// step across the floor, where the guard then stops it.
#[inline]
pub(crate) fn derivatives(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    k: f64,
    c: f64,
    l: f64,
) -> [f64; 3] {
    let n = ap.rate(l);
    let k_out = k.max(0.0);
    let k_mp = k.max(1e-12);
    [
        spec.f(k_out) - (rp.delta + n) * k - c,
        rp.sigma * c * (spec.df(k_mp) - rp.rho - rp.delta - n),
        l * n,
    ]
}

/// Default solver settings for the full system.
pub fn default_options() -> Options {
    Options::with_tolerances(1e-8, 1e-10)
}

/// Integrates the full system from `initial` to `t_end` with the default
/// guards.
pub fn integrate_full(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    initial: &EconomyState,
    t_end: f64,
    opts: &Options,
) -> Result<Trajectory> {
    integrate_full_guarded(spec, rp, ap, initial, t_end, opts, &Guards::default())
}

/// [`integrate_full`] with explicit guard thresholds. Integration failures
/// are reported through [`Trajectory::termination`], never as an error; the
/// trajectory then holds every step accepted before the failure.
pub fn integrate_full_guarded(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    initial: &EconomyState,
    t_end: f64,
    opts: &Options,
    guards: &Guards,
) -> Result<Trajectory> {
    spec.validate()?;
    rp.validate()?;
    ap.validate()?;
    if !(initial.k > 0.0) || !(initial.c >= 0.0) || !(initial.l > 0.0) {
        return Err(Error::Domain {
            what: "initial state (needs k > 0, c >= 0, L > 0)",
            value: if initial.k > 0.0 { initial.c } else { initial.k },
        });
    }
    if !(t_end >= initial.t) {
        return Err(Error::Domain {
            what: "integration end time",
            value: t_end,
        });
    }
    let check_c = initial.c > 0.0;
    let mut hit: Option<(usize, f64)> = None;
    let mut sol = ode::integrate(
        |_, y: &[f64; 3]| derivatives(spec, rp, ap, y[0], y[1], y[2]),
        initial.t,
        initial.as_array(),
        t_end,
        opts,
        |step| {
            let y = step.y;
            let crossed = if y[0] > guards.k_max {
                Some((0, guards.k_max))
            } else if y[0] < guards.k_min {
                Some((0, guards.k_min))
            } else if check_c && y[1] < guards.c_min {
                Some((1, guards.c_min))
            } else {
                None
            };
            match crossed {
                Some(c) => {
                    hit = Some(c);
                    Control::Stop
                }
                None => Control::Continue,
            }
        },
    );
    let termination = match (sol.outcome, hit) {
        (Outcome::Stopped, Some((component, level))) => {
            let n = sol.t.len();
            let seg = sol.segments[n - 2];
            let t_cross = roots::bisect(
                |t| seg.eval(t)[component] - level,
                sol.t[n - 2],
                sol.t[n - 1],
                Tolerance {
                    abs: 0.0,
                    rel: 0.0,
                    max_iter: 200,
                },
            )
            .unwrap_or(sol.t[n - 1]);
            sol.truncate_last_step(t_cross);
            let t = sol.t_last();
            if component == 1 {
                Termination::ConsumptionFloor { t }
            } else if level == guards.k_max {
                Termination::BlowUp { t }
            } else {
                Termination::CapitalFloor { t }
            }
        }
        (Outcome::Failed(kind), _) => Termination::Failed {
            t: sol.t_last(),
            kind,
        },
        _ => Termination::Completed,
    };
    Ok(Trajectory::from_solution(sol, termination))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steadystate;

    fn section4() -> (ProductionSpec, RamseyParams, AlleeParams) {
        (
            ProductionSpec::ces(0.3, 0.01).unwrap(),
            RamseyParams::new(0.02, 0.075, 0.01).unwrap(),
            AlleeParams::new(0.025, 1.0, 2.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn steady_state_is_a_fixed_point() {
        let (spec, rp, ap) = section4();
        let ss = steadystate::case2_steady_state(&spec, &rp, 0.0).unwrap();
        let d = rhs_full(&spec, &rp, &ap, &EconomyState::new(0.0, ss.k_inf, ss.c_inf, 1.0)).unwrap();
        assert!(d[0].abs() < 1e-12 && d[1].abs() < 1e-14 && d[2] == 0.0, "{d:?}");
    }

    #[test]
    fn zero_consumption_has_zero_consumption_growth() {
        let (spec, rp, ap) = section4();
        let d = rhs_full(&spec, &rp, &ap, &EconomyState::new(0.0, 3.0, 0.0, 1.0)).unwrap();
        assert_eq!(d[1], 0.0);
    }

    #[test]
    fn rhs_matches_direct_formula_evaluation() {
        let (spec, rp, ap) = section4();
        let (k, c, l) = (1.0, 0.5, 1.5);
        let d = rhs_full(&spec, &rp, &ap, &EconomyState::new(0.0, k, c, l)).unwrap();
        // At k = 1 every CES member gives f = 1 and f' = alpha.
        let n = 0.025 * (1.0 - 1.5 / 2.0) * (1.5 - 1.0);
        assert!((d[0] - (1.0 - (0.075 + n) - 0.5)).abs() < 1e-14);
        assert!((d[1] - 0.01 * 0.5 * (0.3 - 0.02 - 0.075 - n)).abs() < 1e-15);
        assert!((d[2] - 1.5 * n).abs() < 1e-15);
    }

    #[test]
    fn rhs_rejects_nonpositive_capital() {
        let (spec, rp, ap) = section4();
        let err = rhs_full(&spec, &rp, &ap, &EconomyState::new(0.0, 0.0, 0.5, 1.0));
        assert!(matches!(err, Err(Error::Domain { .. })));
    }

    #[test]
    fn zero_consumption_converges_to_solow_equilibrium() {
        let (spec, rp, ap) = section4();
        let k_star = steadystate::solow_equilibrium(&spec, rp.delta, 0.0).unwrap();
        let traj = integrate_full(
            &spec,
            &rp,
            &ap,
            &EconomyState::new(0.0, 1.0, 0.0, 1.0),
            3000.0,
            &default_options(),
        )
        .unwrap();
        assert!(traj.termination.is_completed());
        assert!((traj.last().k / k_star - 1.0).abs() < 1e-6);
        assert!(traj.samples.iter().all(|s| s.c == 0.0));
    }

    #[test]
    fn excessive_consumption_hits_capital_floor() {
        let (spec, rp, ap) = section4();
        let traj = integrate_full(
            &spec,
            &rp,
            &ap,
            &EconomyState::new(0.0, 1.0, 0.99, 1.5),
            5000.0,
            &default_options(),
        )
        .unwrap();
        match traj.termination {
            Termination::CapitalFloor { t } => {
                assert!(t > 0.0 && t < 5000.0);
                assert!((traj.last().k - 1e-12).abs() < 1e-13, "{:?}", traj.last());
            }
            other => panic!("expected capital floor, got {other:?}"),
        }
        assert!(traj.samples.windows(2).all(|w| w[1].t > w[0].t));
    }

    #[test]
    fn dense_output_interpolates_between_samples() {
        let (spec, rp, ap) = section4();
        let traj = integrate_full(
            &spec,
            &rp,
            &ap.with_l0(1.5),
            &EconomyState::new(0.0, 4.0, 1.0, 1.5),
            100.0,
            &Options::with_tolerances(1e-11, 1e-13),
        )
        .unwrap();
        let mid = traj.eval(37.3).unwrap();
        let direct = integrate_full(
            &spec,
            &rp,
            &ap.with_l0(1.5),
            &EconomyState::new(0.0, 4.0, 1.0, 1.5),
            37.3,
            &Options::with_tolerances(1e-11, 1e-13),
        )
        .unwrap();
        assert!((mid.k - direct.last().k).abs() < 1e-8);
        assert!((mid.c - direct.last().c).abs() < 1e-8);
        assert!(traj.eval(101.0).is_none());
    }

    #[test]
    fn halving_tolerance_moves_endpoint_less_than_coarse_tolerance() {
        // Solow dynamics (c = 0) are globally stable, so global error does not
        // get amplified by the saddle instability.
        let (spec, rp, ap) = section4();
        let ap = ap.with_l0(0.5);
        let init = EconomyState::new(0.0, 3.0, 0.0, 0.5);
        let coarse = integrate_full(&spec, &rp, &ap, &init, 500.0, &Options::with_tolerances(1e-8, 1e-10)).unwrap();
        let fine = integrate_full(&spec, &rp, &ap, &init, 500.0, &Options::with_tolerances(5e-9, 5e-11)).unwrap();
        let (a, b) = (coarse.last(), fine.last());
        assert!((a.k - b.k).abs() <= 1e-8 * a.k, "{} vs {}", a.k, b.k);
        assert!((a.l - b.l).abs() <= 1e-8 * a.l.max(1e-10) + 1e-10);
    }
}
