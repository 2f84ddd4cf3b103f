//! Long-run equilibria.
//!
//! With zero initial consumption capital settles at the Solow equilibrium
//! `f(k)/k = delta + n_inf` and consumption stays at zero (case I). With
//! positive initial consumption the economy approaches the modified golden
//! rule `f'(k) = rho + delta + n_inf` (case II). Comparing the shrinking
//! (`n_inf = -r`) and stationary (`n_inf = 0`) regimes gives the consumption
//! gap `D_c` and the consumption-to-capital gap `D_x`.

use crate::dynamics::{RamseyParams, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::math::{abs, exp, ln};
use crate::production::ProductionSpec;
use crate::roots::{self, Tolerance};

const SOLOW_TOL: Tolerance = Tolerance::absolute(1e-10, 200);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SteadyCase {
    /// `c0 = 0`: capital at the Solow equilibrium, no consumption.
    CaseI,
    /// `c0 > 0`: modified golden rule.
    CaseII,
}

impl SteadyCase {
    pub fn name(&self) -> &'static str {
        match self {
            SteadyCase::CaseI => "case_I",
            SteadyCase::CaseII => "case_II",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub case: SteadyCase,
    pub n_infinity: f64,
    pub k_inf: f64,
    pub c_inf: f64,
    /// `c_inf / k_inf`.
    pub x_inf: f64,
    /// `k_inf / f(k_inf)`.
    pub z_inf: f64,
}

/// Positive root of `f(k)/k = delta + n_inf`.
pub fn solow_equilibrium(spec: &ProductionSpec, delta: f64, n_inf: f64) -> Result<f64> {
    spec.validate()?;
    let s = delta + n_inf;
    if !(s > 0.0) {
        return Err(Error::Unstable {
            delta,
            n_infinity: n_inf,
        });
    }
    let (at_zero, at_infinity) = spec.average_product_limits();
    if !(s < at_zero && s > at_infinity) {
        // e.g. Log or CARA with delta + n_inf >= 1: only k = 0 solves it
        return Err(Error::NoSolution {
            what: "Solow equilibrium (only the trivial root k = 0)",
            value: s,
        });
    }
    let g = |k: f64| spec.avg(k) - s;
    let no_root = Error::NoSolution {
        what: "Solow equilibrium",
        value: s,
    };
    let (lo, hi) = roots::expand_bracket(g, 1e-8, 1e8, 10.0, 60).ok_or(no_root.clone())?;
    // The average product must be strictly decreasing across the bracket so
    // the sign change found above is the only one.
    let (a, b) = (ln(lo), ln(hi));
    let mut prev = f64::INFINITY;
    for i in 0..=64 {
        let k = exp(a + (b - a) * i as f64 / 64.0);
        let v = spec.avg(k);
        if !(v < prev) && v.is_finite() && prev.is_finite() {
            return Err(no_root);
        }
        prev = v;
    }
    roots::bisect(g, lo, hi, SOLOW_TOL).ok_or(no_root)
}

/// Case I equilibrium: `k = k*_{n_inf}`, `c = 0`.
pub fn case1_steady_state(spec: &ProductionSpec, delta: f64, n_inf: f64) -> Result<SteadyState> {
    let k = solow_equilibrium(spec, delta, n_inf)?;
    Ok(SteadyState {
        case: SteadyCase::CaseI,
        n_infinity: n_inf,
        k_inf: k,
        c_inf: 0.0,
        x_inf: 0.0,
        z_inf: k / spec.f(k),
    })
}

/// Case II equilibrium: `f'(k) = rho + delta + n_inf`,
/// `c = f(k) - (delta + n_inf) k`.
pub fn case2_steady_state(spec: &ProductionSpec, rp: &RamseyParams, n_inf: f64) -> Result<SteadyState> {
    rp.validate()?;
    let s = rp.delta + n_inf;
    if !(s > 0.0) {
        return Err(Error::Unstable {
            delta: rp.delta,
            n_infinity: n_inf,
        });
    }
    let k = spec.inverse_marginal(rp.rho + s)?;
    if !(k > 0.0) {
        return Err(Error::NoSolution {
            what: "case II capital (marginal product at its supremum)",
            value: rp.rho + s,
        });
    }
    let y = spec.f(k);
    let c = y - s * k;
    Ok(SteadyState {
        case: SteadyCase::CaseII,
        n_infinity: n_inf,
        k_inf: k,
        c_inf: c,
        x_inf: c / k,
        z_inf: k / y,
    })
}

/// Case II states for the shrinking (`n_inf = -r`) and stationary
/// (`n_inf = 0`) regimes and the gaps between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeComparison {
    pub shrinking: SteadyState,
    pub stationary: SteadyState,
    /// `c_{inf,-r} - c_{inf,0}`.
    pub d_c: f64,
    /// `x_{inf,-r} - x_{inf,0} = h(k_{inf,-r}) - h(k_{inf,0})`.
    pub d_x: f64,
    /// `rho (k_{inf,-r} - k_{inf,0}) + r k_{inf,0}`, a lower bound for `d_c`.
    pub d_c_lower_bound: f64,
}

pub fn compare_regimes(spec: &ProductionSpec, rp: &RamseyParams, r: f64) -> Result<RegimeComparison> {
    rp.validate()?;
    if !rp.is_stable_for(r) {
        return Err(Error::Unstable {
            delta: rp.delta,
            n_infinity: -r,
        });
    }
    let shrinking = case2_steady_state(spec, rp, -r)?;
    let stationary = case2_steady_state(spec, rp, 0.0)?;
    let d_c = shrinking.c_inf - stationary.c_inf;
    let d_x = spec.gap(shrinking.k_inf) - spec.gap(stationary.k_inf);
    Ok(RegimeComparison {
        shrinking,
        stationary,
        d_c,
        d_x,
        d_c_lower_bound: rp.rho * (shrinking.k_inf - stationary.k_inf) + r * stationary.k_inf,
    })
}

/// `D_c = c_{inf,-r} - c_{inf,0}`; positive whenever `delta > r`.
pub fn delta_c(spec: &ProductionSpec, rp: &RamseyParams, r: f64) -> Result<f64> {
    Ok(compare_regimes(spec, rp, r)?.d_c)
}

/// `D_x = h(k_{inf,-r}) - h(k_{inf,0})`; its sign depends on the family.
pub fn delta_x(spec: &ProductionSpec, rp: &RamseyParams, r: f64) -> Result<f64> {
    Ok(compare_regimes(spec, rp, r)?.d_x)
}

/// Outcome of comparing a trajectory's endpoint with an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitReport {
    pub matched: bool,
    /// Case of the equilibrium the endpoint matched, if any.
    pub case: Option<SteadyCase>,
    /// `|k_end - k_inf| / k_inf`.
    pub k_error: f64,
    /// Relative for case II, absolute for case I (where `c_inf = 0`).
    pub c_error: f64,
    pub termination: Termination,
}

pub fn verify_limit(trajectory: &Trajectory, steady: &SteadyState, tol: f64) -> LimitReport {
    let end = trajectory.last();
    let k_error = abs(end.k - steady.k_inf) / steady.k_inf;
    let c_error = if steady.c_inf > 0.0 {
        abs(end.c - steady.c_inf) / steady.c_inf
    } else {
        abs(end.c)
    };
    let matched = trajectory.termination.is_completed() && k_error <= tol && c_error <= tol;
    LimitReport {
        matched,
        case: matched.then_some(steady.case),
        k_error,
        c_error,
        termination: trajectory.termination,
    }
}
