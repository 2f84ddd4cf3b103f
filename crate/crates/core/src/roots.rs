//! Bracketing root finders shared by the production, steady-state and
//! shooting code.
//!
//! Everything here works on scalar functions of one variable. Brackets on the
//! positive half-line are bisected at the geometric midpoint while they span
//! more than a factor of four, which keeps the iteration count independent of
//! how many decades the initial bracket covers.

/// Termination rule for a bracketing search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_iter: u32,
}

impl Tolerance {
    pub const fn absolute(abs: f64, max_iter: u32) -> Self {
        Tolerance {
            abs,
            rel: 0.0,
            max_iter,
        }
    }

    pub const fn relative(rel: f64, max_iter: u32) -> Self {
        Tolerance {
            abs: 0.0,
            rel,
            max_iter,
        }
    }

    fn done(&self, lo: f64, hi: f64) -> bool {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        width <= self.abs + self.rel * crate::math::abs(mid)
    }
}

/// Bisection on `[lo, hi]`. Returns `None` when the endpoints do not bracket a
/// sign change. An exact zero at either endpoint is returned as is.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return None;
    }
    for _ in 0..tol.max_iter {
        if tol.done(lo, hi) {
            break;
        }
        let mid = if lo > 0.0 && hi > 4.0 * lo {
            crate::math::sqrt(lo) * crate::math::sqrt(hi)
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Widens `[lo, hi]` (with `0 < lo < hi`) by `factor` at both ends until `f`
/// changes sign across it, at most `max_expansions` times.
pub fn expand_bracket<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    factor: f64,
    max_expansions: u32,
) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo > 0.0 && hi > lo && factor > 1.0);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    for _ in 0..=max_expansions {
        if f_lo.is_finite() && f_hi.is_finite() && (f_lo > 0.0) != (f_hi > 0.0) {
            return Some((lo, hi));
        }
        if f_lo == 0.0 || f_hi == 0.0 {
            return Some((lo, hi));
        }
        lo /= factor;
        hi *= factor;
        f_lo = f(lo);
        f_hi = f(hi);
    }
    None
}

/// Scans the geometric grid `lo, lo*ratio, ...` up to `hi` and returns the
/// first adjacent pair across which `f` changes sign.
pub fn first_sign_change<F>(mut f: F, lo: f64, hi: f64, ratio: f64) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo > 0.0 && ratio > 1.0);
    let mut a = lo;
    let mut fa = f(a);
    while a < hi {
        let b = (a * ratio).min(hi);
        let fb = f(b);
        if fa.is_finite() && fb.is_finite() && (fa > 0.0) != (fb > 0.0) {
            return Some((a, b));
        }
        a = b;
        fa = fb;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt_two() {
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0, Tolerance::absolute(1e-14, 200)).unwrap();
        assert!((root - core::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn bisect_rejects_missing_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, Tolerance::absolute(1e-12, 100)).is_none());
    }

    #[test]
    fn geometric_midpoint_handles_wide_brackets() {
        let root = bisect(|x| x - 3.0e-7, 1e-12, 1e12, Tolerance::relative(1e-13, 200)).unwrap();
        assert!((root / 3.0e-7 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expand_bracket_grows_until_sign_change() {
        let (lo, hi) = expand_bracket(|x| x - 5.0e9, 1.0, 10.0, 10.0, 20).unwrap();
        assert!(lo < 5.0e9 && hi > 5.0e9);
        assert!(expand_bracket(|_| 1.0, 1.0, 2.0, 10.0, 5).is_none());
    }

    #[test]
    fn first_sign_change_reports_leftmost_pair() {
        let (a, b) = first_sign_change(|x| (x - 2.0) * (x - 50.0), 0.1, 1e3, 1.5).unwrap();
        assert!(a < 2.0 && b >= 2.0);
    }
}
