//! Saddle-path selection by forward shooting on initial consumption.
//!
//! For a given capital stock the optimal consumption is the unique value
//! whose trajectory neither runs capital into the ground (consumption too
//! high) nor accumulates towards the zero-consumption Solow state
//! (consumption too low). Bisection on that dichotomy pins it down to
//! floating-point resolution, but the unstable eigenvalue still amplifies
//! the residual error, so a single shot only tracks the saddle path for a
//! limited horizon. [`saddle_path`] therefore keeps the first part of each
//! shot and re-shoots from there.

use alloc::vec::Vec;

use super::{integrate_full, integrate_full_guarded, EconomyState, Guards, RamseyParams, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::math::abs;
use crate::ode::Options;
use crate::population::AlleeParams;
use crate::production::ProductionSpec;
use crate::steadystate::{self, SteadyState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    /// Horizon of each shot; `None` means `20 / rho`.
    pub horizon: Option<f64>,
    pub max_iter: u32,
    /// Fraction of each shot kept before re-shooting.
    pub keep_fraction: f64,
    pub ode: Options,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        ShootingOptions {
            horizon: None,
            max_iter: 80,
            keep_fraction: 0.5,
            ode: Options::with_tolerances(1e-10, 1e-12),
        }
    }
}

impl ShootingOptions {
    pub fn horizon_for(&self, rp: &RamseyParams) -> f64 {
        self.horizon.unwrap_or(20.0 / rp.rho)
    }
}

/// Consumption jump introduced when re-shooting at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Restart {
    pub t: f64,
    pub c_before: f64,
    pub c_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaddlePath {
    pub c0: f64,
    pub trajectory: Trajectory,
    pub restarts: Vec<Restart>,
    /// Case II equilibrium the path is heading for.
    pub steady: SteadyState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Miss {
    TooLow,
    TooHigh,
}

/// Regime-wide quantities shared by every shot.
struct Targets {
    steady: SteadyState,
    /// Capital above which a path is committed to the zero-consumption state.
    k_high: f64,
    /// Capital below which a path is committed to collapse.
    k_low: f64,
}

fn targets(spec: &ProductionSpec, rp: &RamseyParams, ap: &AlleeParams) -> Result<Targets> {
    spec.validate()?;
    rp.validate()?;
    ap.validate()?;
    let regime = ap.classify_regime();
    if !(rp.delta + regime.n_infinity > 0.0) {
        return Err(Error::NoSaddlePath {
            reason: "delta + n_inf <= 0, capital has no stable equilibrium",
        });
    }
    let steady = steadystate::case2_steady_state(spec, rp, regime.n_infinity).map_err(|_| Error::NoSaddlePath {
        reason: "no case II steady state for this regime",
    })?;
    // Extreme quasi-steady capital over the admissible growth rates.
    let eta = regime.eta.min(rp.delta * (1.0 - 1e-9));
    let k_quasi_max = steadystate::case2_steady_state(spec, rp, -eta)
        .map(|s| s.k_inf)
        .unwrap_or(steady.k_inf);
    let k_quasi_min = steadystate::case2_steady_state(spec, rp, eta)
        .map(|s| s.k_inf)
        .unwrap_or(steady.k_inf);
    let k_solow = steadystate::solow_equilibrium(spec, rp.delta, -eta).unwrap_or(10.0 * k_quasi_max);
    Ok(Targets {
        steady,
        k_high: 0.5 * (k_quasi_max.max(steady.k_inf) + k_solow),
        k_low: 1e-3 * k_quasi_min.min(steady.k_inf),
    })
}

#[allow(clippy::too_many_arguments)]
fn classify(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    start: &EconomyState,
    c: f64,
    horizon: f64,
    targets: &Targets,
    opts: &ShootingOptions,
) -> Result<Miss> {
    let guards = Guards {
        k_max: targets.k_high.max(2.0 * start.k),
        k_min: targets.k_low.min(0.5 * start.k),
        c_min: 1e-14,
    };
    let ap = ap.with_l0(start.l);
    let init = EconomyState::new(start.t, start.k, c, start.l);
    let traj = integrate_full_guarded(spec, rp, &ap, &init, start.t + horizon, &opts.ode, &guards)?;
    Ok(match traj.termination {
        Termination::BlowUp { .. } | Termination::ConsumptionFloor { .. } => Miss::TooLow,
        Termination::CapitalFloor { .. } => Miss::TooHigh,
        Termination::Completed | Termination::Failed { .. } => {
            let end = traj.last();
            let n_end = ap.rate(end.l);
            let k_target = steadystate::case2_steady_state(spec, rp, n_end)
                .map(|s| s.k_inf)
                .unwrap_or(targets.steady.k_inf);
            if end.k > k_target {
                Miss::TooLow
            } else {
                Miss::TooHigh
            }
        }
    })
}

fn shoot_from(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    start: &EconomyState,
    targets: &Targets,
    opts: &ShootingOptions,
) -> Result<Shot> {
    let horizon = opts.horizon_for(rp);
    if !(horizon > 0.0) {
        return Err(Error::Domain {
            what: "shooting horizon",
            value: horizon,
        });
    }
    let c_max = spec.f(start.k);
    if classify(spec, rp, ap, start, c_max, horizon, targets, opts)? != Miss::TooHigh {
        return Err(Error::NoSaddlePath {
            reason: "consuming all output does not deplete capital",
        });
    }
    let (mut lo, mut hi) = (0.0, c_max);
    for _ in 0..opts.max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        match classify(spec, rp, ap, start, mid, horizon, targets, opts)? {
            Miss::TooLow => lo = mid,
            Miss::TooHigh => hi = mid,
        }
    }
    if lo == 0.0 {
        return Err(Error::NoSaddlePath {
            reason: "every positive consumption level depletes capital",
        });
    }
    let trusted_for = agreement_span(spec, rp, ap, start, (lo, hi), horizon, opts)?;
    Ok(Shot {
        c: 0.5 * (lo + hi),
        trusted_for: trusted_for.max(1e-3 * horizon),
    })
}

/// Relative gap between the bracketing shots up to which the midpoint shot
/// is taken to follow the saddle path.
const AGREEMENT: f64 = 1e-6;

struct Shot {
    c: f64,
    /// Time span over which the bracketing shots still agree.
    trusted_for: f64,
}

/// The saddle path runs between the trajectories started from the two ends
/// of the final bracket. Returns how long they stay within [`AGREEMENT`]
/// of each other, measured at the accepted steps of the lower one.
fn agreement_span(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    start: &EconomyState,
    (lo, hi): (f64, f64),
    horizon: f64,
    opts: &ShootingOptions,
) -> Result<f64> {
    let ap = ap.with_l0(start.l);
    let shot = |c: f64| {
        let init = EconomyState::new(start.t, start.k, c, start.l);
        integrate_full(spec, rp, &ap, &init, start.t + horizon, &opts.ode)
    };
    let (a, b) = (shot(lo)?, shot(hi)?);
    let rel = |x: f64, y: f64| abs(x - y) / abs(x).max(abs(y)).max(f64::MIN_POSITIVE);
    let mut agreed = start.t;
    for s in &a.samples {
        match b.eval(s.t) {
            Some(o) if rel(s.k, o.k) <= AGREEMENT && rel(s.c, o.c) <= AGREEMENT => agreed = s.t,
            _ => break,
        }
    }
    Ok(agreed - start.t)
}

/// Initial consumption on the saddle path from `(k0, ap.l0)`, by bisection
/// over `c0` in `(0, f(k0))` with shots of length `opts.horizon`.
pub fn shoot_initial_consumption(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    k0: f64,
    opts: &ShootingOptions,
) -> Result<f64> {
    if !(k0 > 0.0) {
        return Err(Error::Domain {
            what: "initial capital",
            value: k0,
        });
    }
    let targets = targets(spec, rp, ap)?;
    shoot_from(spec, rp, ap, &EconomyState::new(0.0, k0, 0.0, ap.l0), &targets, opts).map(|shot| shot.c)
}

/// Saddle path from `(k0, ap.l0)` over `[0, t_end]`. Each shot is kept for
/// at most `keep_fraction * horizon` time units, and no longer than the
/// bracketing shots agree, before re-shooting from its end.
pub fn saddle_path(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    k0: f64,
    t_end: f64,
    opts: &ShootingOptions,
) -> Result<SaddlePath> {
    if !(k0 > 0.0) {
        return Err(Error::Domain {
            what: "initial capital",
            value: k0,
        });
    }
    if !(t_end >= 0.0) {
        return Err(Error::Domain {
            what: "saddle path horizon",
            value: t_end,
        });
    }
    let targets = targets(spec, rp, ap)?;
    let keep = opts.keep_fraction.clamp(1e-3, 1.0) * opts.horizon_for(rp);

    let mut start = EconomyState::new(0.0, k0, 0.0, ap.l0);
    let mut c0 = f64::NAN;
    let mut path: Option<Trajectory> = None;
    let mut restarts = Vec::new();
    loop {
        let Shot { c, trusted_for } = shoot_from(spec, rp, ap, &start, &targets, opts)?;
        let seg_end = (start.t + keep.min(trusted_for)).min(t_end);
        let init = EconomyState::new(start.t, start.k, c, start.l);
        let piece = integrate_full(spec, rp, &ap.with_l0(start.l), &init, seg_end, &opts.ode)?;
        let done = !piece.termination.is_completed() || seg_end >= t_end;
        match path.as_mut() {
            None => {
                c0 = c;
                path = Some(piece);
            }
            Some(traj) => {
                restarts.push(Restart {
                    t: start.t,
                    c_before: start.c,
                    c_after: c,
                });
                traj.append(piece);
            }
        }
        let traj = path.as_ref().expect("set above");
        if done {
            break;
        }
        start = *traj.last();
    }
    Ok(SaddlePath {
        c0,
        trajectory: path.expect("at least one segment"),
        restarts,
        steady: targets.steady,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn section4() -> (ProductionSpec, RamseyParams, AlleeParams) {
        (
            ProductionSpec::ces(0.3, 0.01).unwrap(),
            RamseyParams::new(0.02, 0.075, 0.01).unwrap(),
            AlleeParams::new(0.025, 1.0, 2.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn starting_at_the_steady_state_returns_its_consumption() {
        let (spec, rp, ap) = section4();
        let ss = steadystate::case2_steady_state(&spec, &rp, 0.0).unwrap();
        let c0 = shoot_initial_consumption(&spec, &rp, &ap, ss.k_inf, &ShootingOptions::default()).unwrap();
        assert!((c0 / ss.c_inf - 1.0).abs() < 1e-6, "{c0} vs {}", ss.c_inf);
    }

    #[test]
    fn unstable_regime_has_no_saddle_path() {
        let (spec, rp, ap) = section4();
        let ap = ap.with_r(0.085).with_l0(0.5);
        assert!(matches!(
            shoot_initial_consumption(&spec, &rp, &ap, 5.0, &ShootingOptions::default()),
            Err(Error::NoSaddlePath { .. })
        ));
    }

    #[test]
    fn half_steady_capital_converges() {
        let (spec, rp, ap) = section4();
        let ap = ap.with_l0(1.5);
        let ss = steadystate::case2_steady_state(&spec, &rp, 0.0).unwrap();
        let k0 = 0.5 * ss.k_inf;
        let path = saddle_path(&spec, &rp, &ap, k0, 2000.0, &ShootingOptions::default()).unwrap();
        assert!(path.c0 > 0.0 && path.c0 < spec.f(k0));
        let end = path.trajectory.last();
        assert!(path.trajectory.termination.is_completed());
        assert!((end.k / ss.k_inf - 1.0).abs() < 1e-3, "{end:?}");
        assert!((end.c / ss.c_inf - 1.0).abs() < 1e-3, "{end:?}");
        for r in &path.restarts {
            assert!((r.c_after / r.c_before - 1.0).abs() < 1e-6, "{r:?}");
        }
        // feasibility along the path
        for s in &path.trajectory.samples {
            assert!(s.c <= spec.f(s.k));
        }
    }

    #[test]
    fn log_production_high_depreciation_reaches_its_steady_state() {
        let rp = RamseyParams::new(0.2, 0.75, 0.5).unwrap();
        let ap = AlleeParams::new(0.25, 1.0, 2.0, 0.5).unwrap();
        let path = saddle_path(&ProductionSpec::Log, &rp, &ap, 0.2, 300.0, &ShootingOptions::default()).unwrap();
        let end = path.trajectory.last();
        assert!((end.k - 0.428571).abs() < 1e-3, "{end:?}");
    }
}
