//! Intensive production functions `f(k)`, output per unit of labour as a
//! function of capital per unit of labour.
//!
//! Four strictly concave families are supported. Each carries hand-derived
//! first and second derivatives; the inverse of the marginal product has a
//! closed form except for CES, which is solved by bracketed bisection.

use crate::error::{Error, Result};
use crate::math::{exp, expm1, ln, ln_1p, powf};
#[cfg(test)]
use crate::math::abs;
use crate::roots::{self, Tolerance};

/// Tagged choice of intensive production function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProductionSpec {
    /// `f(k) = (alpha k^tau + 1 - alpha)^(1/tau)`, `0 < alpha < 1`,
    /// `tau < 1`, `tau != 0`.
    Ces { alpha: f64, tau: f64 },
    /// `f(k) = k^alpha`, `0 < alpha < 1`.
    CobbDouglas { alpha: f64 },
    /// `f(k) = ln(1 + k)`.
    Log,
    /// `f(k) = 1 - exp(-k)`.
    Cara,
}

const INVERSE_TOL: Tolerance = Tolerance::relative(1e-12, 200);
const CRITICAL_POINT_TOL: Tolerance = Tolerance::absolute(1e-8, 200);

impl ProductionSpec {
    pub fn ces(alpha: f64, tau: f64) -> Result<Self> {
        let spec = ProductionSpec::Ces { alpha, tau };
        spec.validate()?;
        Ok(spec)
    }

    pub fn cobb_douglas(alpha: f64) -> Result<Self> {
        let spec = ProductionSpec::CobbDouglas { alpha };
        spec.validate()?;
        Ok(spec)
    }

    /// Short lowercase family name, as used in configuration files.
    pub fn kind_name(&self) -> &'static str {
        match self {
            ProductionSpec::Ces { .. } => "ces",
            ProductionSpec::CobbDouglas { .. } => "cobb_douglas",
            ProductionSpec::Log => "log",
            ProductionSpec::Cara => "cara",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            ProductionSpec::Ces { alpha, .. } | ProductionSpec::CobbDouglas { alpha } => {
                Some(alpha)
            }
            _ => None,
        }
    }

    pub fn tau(&self) -> Option<f64> {
        match *self {
            ProductionSpec::Ces { tau, .. } => Some(tau),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(alpha) = self.alpha() {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::InvalidParameter {
                    name: "production.alpha",
                    value: alpha,
                    expected: "0 < alpha < 1",
                });
            }
        }
        if let Some(tau) = self.tau() {
            if !(tau < 1.0 && tau != 0.0 && tau.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "production.tau",
                    value: tau,
                    expected: "tau < 1 and tau != 0",
                });
            }
        }
        Ok(())
    }

    /// `f(k)` for `k >= 0`.
    pub fn output(&self, k: f64) -> Result<f64> {
        self.validate()?;
        if !(k >= 0.0) || k.is_infinite() {
            return Err(Error::Domain {
                what: "intensive output",
                value: k,
            });
        }
        Ok(self.f(k))
    }

    /// `f'(k)` for `k > 0`.
    pub fn marginal_product(&self, k: f64) -> Result<f64> {
        self.validate()?;
        check_positive("marginal product", k)?;
        Ok(self.df(k))
    }

    /// `f''(k)` for `k > 0`.
    pub fn second_derivative(&self, k: f64) -> Result<f64> {
        self.validate()?;
        check_positive("second derivative", k)?;
        Ok(self.d2f(k))
    }

    /// `f(k) / k` for `k > 0`.
    pub fn average_product(&self, k: f64) -> Result<f64> {
        self.validate()?;
        check_positive("average product", k)?;
        Ok(self.avg(k))
    }

    /// `h(k) = f(k)/k - f'(k)`, positive for every strictly concave family.
    pub fn curvature_gap(&self, k: f64) -> Result<f64> {
        self.validate()?;
        check_positive("curvature gap", k)?;
        Ok(self.gap(k))
    }

    /// `h'(k) = (k f'(k) - f(k)) / k^2 - f''(k)`.
    pub fn curvature_gap_slope(&self, k: f64) -> Result<f64> {
        self.validate()?;
        check_positive("curvature gap slope", k)?;
        Ok(self.gap_slope(k))
    }

    /// Capital share of output `z = k / f(k)`.
    pub fn share_ratio(&self, k: f64) -> Result<f64> {
        self.validate()?;
        check_positive("share ratio", k)?;
        Ok(k / self.f(k))
    }

    /// Open interval `(inf, sup)` of values taken by `f'` on `k > 0`.
    pub fn marginal_product_range(&self) -> (f64, f64) {
        match *self {
            ProductionSpec::Ces { alpha, tau } => {
                let limit = powf(alpha, 1.0 / tau);
                if tau > 0.0 {
                    (limit, f64::INFINITY)
                } else {
                    (0.0, limit)
                }
            }
            ProductionSpec::CobbDouglas { .. } => (0.0, f64::INFINITY),
            ProductionSpec::Log | ProductionSpec::Cara => (0.0, 1.0),
        }
    }

    /// Limits of `f(k)/k` as `k -> 0+` and `k -> infinity`.
    pub fn average_product_limits(&self) -> (f64, f64) {
        match *self {
            ProductionSpec::Ces { alpha, tau } => {
                let limit = powf(alpha, 1.0 / tau);
                if tau > 0.0 {
                    (f64::INFINITY, limit)
                } else {
                    (limit, 0.0)
                }
            }
            ProductionSpec::CobbDouglas { .. } => (f64::INFINITY, 0.0),
            ProductionSpec::Log | ProductionSpec::Cara => (1.0, 0.0),
        }
    }

    /// `lim f'(k)` as `k -> infinity`.
    pub fn marginal_product_at_infinity(&self) -> f64 {
        match *self {
            ProductionSpec::Ces { alpha, tau } if tau > 0.0 => powf(alpha, 1.0 / tau),
            _ => 0.0,
        }
    }

    /// Solves `f'(k) = y`.
    ///
    /// `y` equal to the supremum of a bounded range (`y = 1` for Log and CARA)
    /// is accepted and maps to `k = 0`.
    pub fn inverse_marginal(&self, y: f64) -> Result<f64> {
        self.validate()?;
        let no_solution = Error::NoSolution {
            what: "inverse marginal product",
            value: y,
        };
        if !(y > 0.0) || !y.is_finite() {
            return Err(no_solution);
        }
        match *self {
            ProductionSpec::Log => {
                if y > 1.0 {
                    return Err(no_solution);
                }
                Ok(1.0 / y - 1.0)
            }
            ProductionSpec::Cara => {
                if y > 1.0 {
                    return Err(no_solution);
                }
                Ok(-ln(y))
            }
            ProductionSpec::CobbDouglas { alpha } => Ok(powf(y / alpha, 1.0 / (alpha - 1.0))),
            ProductionSpec::Ces { .. } => {
                let (lo, hi) = self.marginal_product_range();
                if !(y > lo && y < hi) {
                    return Err(no_solution);
                }
                let target = ln(y);
                // f' is strictly decreasing, so ln f' - ln y has one sign change.
                let g = |k: f64| ln(self.df(k)) - target;
                let (a, b) = roots::expand_bracket(g, 1e-8, 1e8, 10.0, 60).ok_or(no_solution.clone())?;
                roots::bisect(g, a, b, INVERSE_TOL).ok_or(no_solution)
            }
        }
    }

    /// Recovers `k` from the share ratio `z = k / f(k)`, which is strictly
    /// increasing in `k`.
    pub fn capital_from_share_ratio(&self, z: f64) -> Result<f64> {
        self.validate()?;
        let no_solution = Error::NoSolution {
            what: "capital from share ratio",
            value: z,
        };
        if !(z > 0.0) || !z.is_finite() {
            return Err(no_solution);
        }
        let target = ln(z);
        let g = |k: f64| ln(k) - ln(self.f(k)) - target;
        let (a, b) = roots::expand_bracket(g, 1e-8, 1e8, 10.0, 60).ok_or(no_solution.clone())?;
        roots::bisect(g, a, b, Tolerance::relative(1e-15, 200)).ok_or(no_solution)
    }

    /// Unique zero of `h'` for families whose curvature gap rises and then
    /// falls. `None` when `h'` keeps one sign over `[1e-6, 1e6]`, as for
    /// Cobb–Douglas where `h` is strictly decreasing.
    pub fn curvature_gap_critical_point(&self) -> Option<f64> {
        if self.validate().is_err() {
            return None;
        }
        if let ProductionSpec::CobbDouglas { .. } = self {
            return None;
        }
        let slope = |k: f64| self.gap_slope(k);
        let (a, b) = roots::first_sign_change(slope, 1e-6, 1e6, 1.25)?;
        roots::bisect(slope, a, b, CRITICAL_POINT_TOL)
    }

    // Unchecked evaluations used by the integrators once the spec and the
    // state have been validated.

    #[inline]
    pub(crate) fn f(&self, k: f64) -> f64 {
        match *self {
            ProductionSpec::Ces { alpha, tau } => {
                if k == 0.0 {
                    return if tau > 0.0 { powf(1.0 - alpha, 1.0 / tau) } else { 0.0 };
                }
                exp(ces_log_base(alpha, tau, k) / tau)
            }
            ProductionSpec::CobbDouglas { alpha } => {
                if k == 0.0 {
                    0.0
                } else {
                    powf(k, alpha)
                }
            }
            ProductionSpec::Log => ln_1p(k),
            ProductionSpec::Cara => -expm1(-k),
        }
    }

    #[inline]
    pub(crate) fn df(&self, k: f64) -> f64 {
        match *self {
            ProductionSpec::Ces { alpha, tau } => {
                let log_base = ces_log_base(alpha, tau, k);
                alpha * exp(log_base * (1.0 / tau - 1.0) + (tau - 1.0) * ln(k))
            }
            ProductionSpec::CobbDouglas { alpha } => alpha * powf(k, alpha - 1.0),
            ProductionSpec::Log => 1.0 / (1.0 + k),
            ProductionSpec::Cara => exp(-k),
        }
    }

    #[inline]
    pub(crate) fn d2f(&self, k: f64) -> f64 {
        match *self {
            ProductionSpec::Ces { tau, .. } => {
                let d = self.df(k);
                (1.0 - tau) * d / k * (k * d / self.f(k) - 1.0)
            }
            ProductionSpec::CobbDouglas { alpha } => alpha * (alpha - 1.0) * powf(k, alpha - 2.0),
            ProductionSpec::Log => -1.0 / ((1.0 + k) * (1.0 + k)),
            ProductionSpec::Cara => -exp(-k),
        }
    }

    #[inline]
    pub(crate) fn avg(&self, k: f64) -> f64 {
        match *self {
            ProductionSpec::CobbDouglas { alpha } => powf(k, alpha - 1.0),
            _ => self.f(k) / k,
        }
    }

    #[inline]
    pub(crate) fn gap(&self, k: f64) -> f64 {
        match *self {
            ProductionSpec::CobbDouglas { alpha } => (1.0 - alpha) * powf(k, alpha - 1.0),
            _ => self.avg(k) - self.df(k),
        }
    }

    #[inline]
    pub(crate) fn gap_slope(&self, k: f64) -> f64 {
        (k * self.df(k) - self.f(k)) / (k * k) - self.d2f(k)
    }
}

/// `ln(alpha k^tau + 1 - alpha)` written as `ln(1 + alpha (k^tau - 1))` so
/// that `tau -> 0` keeps full precision.
#[inline]
fn ces_log_base(alpha: f64, tau: f64, k: f64) -> f64 {
    ln_1p(alpha * expm1(tau * ln(k)))
}

fn check_positive(what: &'static str, k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: k })
    }
}

/// Relative difference helper used in tests across the crate.
#[cfg(test)]
pub(crate) fn rel_diff(a: f64, b: f64) -> f64 {
    abs(a - b) / abs(b).max(1e-300)
}
