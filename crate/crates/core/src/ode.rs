//! Embedded Runge–Kutta 5(4) integrator (Dormand–Prince coefficients) with
//! PI step-size control and a fifth-order continuous extension.
//!
//! One integrator drives every ODE in the crate: labour, the full
//! capital/consumption/labour system, the Solow comparison equation and the
//! ratio system. States are fixed-size arrays so systems stay allocation free
//! apart from the stored solution.

use alloc::vec::Vec;

use crate::error::FailureKind;
use crate::math::{abs, powf, sqrt};

/// Step-control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step size.
    pub h0: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rtol: 1e-8,
            atol: 1e-10,
            h0: 1e-3,
            h_max: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

impl Options {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Options {
            rtol,
            atol,
            ..Options::default()
        }
    }
}

/// Returned by the step observer after every accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    /// Reached the requested end time.
    Completed,
    /// The observer asked to stop after an accepted step.
    Stopped,
    /// The integrator gave up; the stored solution is valid up to the last
    /// accepted step.
    Failed(FailureKind),
}

/// Continuous extension over one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<const D: usize> {
    pub t0: f64,
    pub h: f64,
    coeffs: [[f64; D]; 5],
}

impl<const D: usize> Segment<D> {
    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Evaluates the interpolant at `t`, which should lie in `[t0, t0 + h]`.
    pub fn eval(&self, t: f64) -> [f64; D] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let [c1, c2, c3, c4, c5] = &self.coeffs;
        let mut out = [0.0; D];
        for i in 0..D {
            out[i] = c1[i] + s * (c2[i] + s1 * (c3[i] + s * (c4[i] + s1 * c5[i])));
        }
        out
    }
}

/// Accepted step handed to the observer.
#[derive(Debug, Clone, Copy)]
pub struct Step<'a, const D: usize> {
    pub t_prev: f64,
    pub y_prev: &'a [f64; D],
    pub t: f64,
    pub y: &'a [f64; D],
    pub segment: &'a Segment<D>,
}

/// Accepted states plus the dense output between them.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<const D: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; D]>,
    pub segments: Vec<Segment<D>>,
    pub outcome: Outcome,
}

impl<const D: usize> Solution<D> {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_last(&self) -> f64 {
        *self.t.last().expect("solution holds at least the initial state")
    }

    pub fn y_last(&self) -> [f64; D] {
        *self.y.last().expect("solution holds at least the initial state")
    }

    /// Dense evaluation at `t`; `None` outside the integrated interval.
    pub fn eval(&self, t: f64) -> Option<[f64; D]> {
        let t0 = self.t[0];
        let t1 = self.t_last();
        if t < t0 || t > t1 || t.is_nan() {
            return None;
        }
        if self.segments.is_empty() || t == t0 {
            return Some(self.y[0]);
        }
        if t == t1 {
            return Some(self.y_last());
        }
        // first segment whose end is >= t
        let idx = self.t[1..].partition_point(|&ti| ti < t);
        Some(self.segments[idx.min(self.segments.len() - 1)].eval(t))
    }

    /// Cuts the solution at `t`, which must fall inside the last step. The
    /// final state is replaced by its interpolated value.
    pub fn truncate_last_step(&mut self, t: f64) {
        let n = self.t.len();
        if n < 2 {
            return;
        }
        let seg = self.segments[n - 2];
        if t <= self.t[n - 2] || t >= self.t[n - 1] {
            return;
        }
        self.t[n - 1] = t;
        self.y[n - 1] = seg.eval(t);
    }
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// continuous extension
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

#[inline]
fn combine<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for i in 0..D {
        let mut acc = 0.0;
        for (w, k) in terms {
            acc += w * k[i];
        }
        out[i] += h * acc;
    }
    out
}

fn all_finite<const D: usize>(v: &[f64; D]) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Integrates `y' = rhs(t, y)` from `(t0, y0)` to `t_end`, calling `observer`
/// after every accepted step.
///
/// Stages that produce non-finite values are treated as a rejected step, so a
/// right-hand side that is only defined on part of the state space can be
/// integrated up to its boundary and cut there by the observer.
pub fn integrate<const D: usize, F, O>(
    mut rhs: F,
    t0: f64,
    y0: [f64; D],
    t_end: f64,
    opts: &Options,
    mut observer: O,
) -> Solution<D>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
    O: FnMut(&Step<'_, D>) -> Control,
{
    let mut sol = Solution {
        t: alloc::vec![t0],
        y: alloc::vec![y0],
        segments: Vec::new(),
        outcome: Outcome::Completed,
    };
    if !(t_end > t0) {
        return sol;
    }

    let expo1 = 0.2 - BETA * 0.75;
    let mut fac_old: f64 = 1e-4;
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    if !all_finite(&k1) {
        sol.outcome = Outcome::Failed(FailureKind::NonFinite);
        return sol;
    }
    let mut h = opts.h0.min(opts.h_max).min(t_end - t0);
    let mut rejected_last = false;
    let mut steps = 0usize;

    loop {
        if steps >= opts.max_steps {
            sol.outcome = Outcome::Failed(FailureKind::StepBudget);
            return sol;
        }
        if h <= 16.0 * f64::EPSILON * abs(t).max(1e-300) {
            sol.outcome = Outcome::Failed(FailureKind::StepUnderflow);
            return sol;
        }
        let mut last = false;
        if t + 1.01 * h >= t_end {
            h = t_end - t;
            last = true;
        }
        steps += 1;

        let k2 = rhs(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            t + C4 * h,
            &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            t + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &combine(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y1 = combine(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs(t + h, &y1);

        let stages_ok = [&k2, &k3, &k4, &k5, &k6, &k7].iter().all(|k| all_finite(k))
            && all_finite(&y1);
        if !stages_ok {
            h *= 0.25;
            rejected_last = true;
            continue;
        }

        let mut err = 0.0;
        for i in 0..D {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * abs(y[i]).max(abs(y1[i]));
            err += (e / sc) * (e / sc);
        }
        let err = sqrt(err / D as f64);
        if !err.is_finite() {
            h *= 0.25;
            rejected_last = true;
            continue;
        }

        let fac11 = powf(err, expo1);
        let fac = (fac11 / powf(fac_old, BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
        let mut h_new = h / fac;

        if err <= 1.0 {
            fac_old = err.max(1e-4);
            let mut coeffs = [[0.0; D]; 5];
            for i in 0..D {
                let dy = y1[i] - y[i];
                let bspl = h * k1[i] - dy;
                coeffs[0][i] = y[i];
                coeffs[1][i] = dy;
                coeffs[2][i] = bspl;
                coeffs[3][i] = dy - h * k7[i] - bspl;
                coeffs[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]);
            }
            let segment = Segment { t0: t, h, coeffs };
            let t_new = if last { t_end } else { t + h };
            let control = observer(&Step {
                t_prev: t,
                y_prev: &y,
                t: t_new,
                y: &y1,
                segment: &segment,
            });
            sol.segments.push(segment);
            sol.t.push(t_new);
            sol.y.push(y1);
            t = t_new;
            y = y1;
            k1 = k7;
            if control == Control::Stop {
                sol.outcome = Outcome::Stopped;
                return sol;
            }
            if last {
                return sol;
            }
            if rejected_last {
                h_new = h_new.min(h);
            }
            rejected_last = false;
            h = h_new.min(opts.h_max);
        } else {
            h_new = h / (1.0 / FAC_MIN).min(fac11 / SAFETY);
            rejected_last = true;
            h = h_new;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::exp;

    fn never_stop<const D: usize>(_: &Step<'_, D>) -> Control {
        Control::Continue
    }

    #[test]
    fn exponential_decay_matches_closed_form() {
        let opts = Options::with_tolerances(1e-10, 1e-12);
        let sol = integrate(|_, y: &[f64; 1]| [-0.5 * y[0]], 0.0, [2.0], 10.0, &opts, never_stop);
        assert_eq!(sol.outcome, Outcome::Completed);
        assert_eq!(sol.t_last(), 10.0);
        let exact = 2.0 * exp(-5.0);
        assert!((sol.y_last()[0] - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn dense_output_tracks_harmonic_oscillator() {
        let opts = Options::with_tolerances(1e-10, 1e-12);
        let sol = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            20.0,
            &opts,
            never_stop,
        );
        for i in 0..400 {
            let t = 0.05 * i as f64;
            let y = sol.eval(t).unwrap();
            assert!((y[0] - libm::cos(t)).abs() < 1e-8, "t = {t}");
            assert!((y[1] + libm::sin(t)).abs() < 1e-8, "t = {t}");
        }
        assert!(sol.eval(20.5).is_none());
    }

    #[test]
    fn observer_can_stop_and_truncate() {
        let opts = Options::default();
        let mut sol = integrate(
            |_, y: &[f64; 1]| [y[0]],
            0.0,
            [1.0],
            100.0,
            &opts,
            |s| {
                if s.y[0] > 1e3 {
                    Control::Stop
                } else {
                    Control::Continue
                }
            },
        );
        assert_eq!(sol.outcome, Outcome::Stopped);
        let t_cross = libm::log(1e3);
        assert!(sol.t_last() >= t_cross);
        sol.truncate_last_step(t_cross);
        assert!((sol.y_last()[0] - 1e3).abs() < 1e-3);
    }

    #[test]
    fn zero_length_interval_returns_initial_state() {
        let sol = integrate(
            |_, y: &[f64; 1]| [y[0]],
            1.0,
            [3.0],
            1.0,
            &Options::default(),
            never_stop,
        );
        assert_eq!(sol.len(), 1);
        assert_eq!(sol.outcome, Outcome::Completed);
    }

    #[test]
    fn finite_time_singularity_reports_failure() {
        // y' = y^2, y(0) = 1 blows up at t = 1
        let opts = Options {
            max_steps: 100_000,
            ..Options::with_tolerances(1e-8, 1e-10)
        };
        let sol = integrate(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, &opts, never_stop);
        assert!(matches!(sol.outcome, Outcome::Failed(_)));
        assert!(sol.t_last() < 1.0 + 1e-6 && sol.t_last() > 0.99, "{} {:?}", sol.t_last(), sol.outcome);
    }
}
