//! The system in the ratio variables `z = k / f(k)` and `x = c / k`:
//!
//! ```text
//! z'/z = (1 - f'(k) z) (1/z - (delta + n) - x)
//! x'/x = (sigma f'(k) - 1/z) + (1 - sigma)(delta + n) - sigma rho + x
//! ```
//!
//! `k` is recovered from `z` by inverting the strictly increasing map
//! `k -> k / f(k)` at every right-hand-side evaluation.

use alloc::vec::Vec;

use super::RamseyParams;
use crate::error::{Error, Result};
use crate::ode::{self, Control, Options, Outcome, Solution};
use crate::population::AlleeParams;
use crate::production::ProductionSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSample {
    pub t: f64,
    pub z: f64,
    pub x: f64,
    pub l: f64,
}

/// Integrated `(z, x, L)` series with dense output.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioPath {
    pub solution: Solution<3>,
}

impl RatioPath {
    pub fn samples(&self) -> Vec<RatioSample> {
        self.solution
            .t
            .iter()
            .zip(&self.solution.y)
            .map(|(&t, y)| RatioSample {
                t,
                z: y[0],
                x: y[1],
                l: y[2],
            })
            .collect()
    }

    pub fn eval(&self, t: f64) -> Option<RatioSample> {
        self.solution.eval(t).map(|y| RatioSample {
            t,
            z: y[0],
            x: y[1],
            l: y[2],
        })
    }
}

/// Integrates the ratio system from `(z0, x0, L0)` at `t = 0` to `t_end`.
pub fn integrate_ratio(
    spec: &ProductionSpec,
    rp: &RamseyParams,
    ap: &AlleeParams,
    initial: (f64, f64, f64),
    t_end: f64,
    opts: &Options,
) -> Result<RatioPath> {
    spec.validate()?;
    rp.validate()?;
    ap.validate()?;
    let (z0, x0, l0) = initial;
    if !(x0 > 0.0) {
        return Err(Error::Domain {
            what: "initial consumption-to-capital ratio",
            value: x0,
        });
    }
    if !(l0 > 0.0) {
        return Err(Error::Domain {
            what: "initial labour",
            value: l0,
        });
    }
    // Surfaces an out-of-range z0 as an error before integrating.
    spec.capital_from_share_ratio(z0)?;

    let solution = ode::integrate(
        |_, y: &[f64; 3]| {
            let (z, x, l) = (y[0], y[1], y[2]);
            let Ok(k) = spec.capital_from_share_ratio(z) else {
                return [f64::NAN; 3];
            };
            let mp = spec.df(k);
            let s = rp.delta + ap.rate(l);
            [
                z * (1.0 - mp * z) * (1.0 / z - s - x),
                x * ((rp.sigma * mp - 1.0 / z) + (1.0 - rp.sigma) * s - rp.sigma * rp.rho + x),
                l * ap.rate(l),
            ]
        },
        0.0,
        [z0, x0, l0],
        t_end,
        opts,
        |_| Control::Continue,
    );
    if let Outcome::Failed(kind) = solution.outcome {
        return Err(match kind {
            crate::error::FailureKind::NonFinite => Error::Domain {
                what: "share ratio left the range of k / f(k)",
                value: solution.y_last()[0],
            },
            kind => Error::Integration {
                t: solution.t_last(),
                kind,
            },
        });
    }
    Ok(RatioPath { solution })
}
