//! Allee-effect labour dynamics
//! `L' = r L (1 - L/M)(L/N - 1)` and the growth rate `n = L'/L`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, exp, ln};
use crate::ode::{self, Control, Options, Outcome, Solution};
use crate::roots::{self, Tolerance};

/// Default integration horizon for asymptotic questions.
pub const DEFAULT_T_END: f64 = 2000.0;

/// Parameters of the cubic Allee growth law and the initial labour force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlleeParams {
    /// Intrinsic rate `r > 0`.
    pub r: f64,
    /// Critical threshold `N > 0`.
    pub threshold: f64,
    /// Carrying capacity `M > N`.
    pub capacity: f64,
    /// Initial labour `L0 > 0`.
    pub l0: f64,
}

impl AlleeParams {
    pub fn new(r: f64, threshold: f64, capacity: f64, l0: f64) -> Result<Self> {
        let p = AlleeParams {
            r,
            threshold,
            capacity,
            l0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool, &'static str); 4] = [
            ("population.r", self.r, self.r > 0.0 && self.r.is_finite(), "r > 0"),
            (
                "population.threshold",
                self.threshold,
                self.threshold > 0.0 && self.threshold.is_finite(),
                "N > 0",
            ),
            (
                "population.capacity",
                self.capacity,
                self.capacity > self.threshold && self.capacity.is_finite(),
                "M > N",
            ),
            ("population.l0", self.l0, self.l0 > 0.0 && self.l0.is_finite(), "L0 > 0"),
        ];
        for (name, value, ok, expected) in checks {
            if !ok {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    expected,
                });
            }
        }
        Ok(())
    }

    /// Same parameters with a different initial labour force.
    pub fn with_l0(self, l0: f64) -> Self {
        AlleeParams { l0, ..self }
    }

    /// Same parameters with a different intrinsic rate.
    pub fn with_r(self, r: f64) -> Self {
        AlleeParams { r, ..self }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.threshold + self.capacity)
    }

    /// `n(L) = r (1 - L/M)(L/N - 1)`.
    pub fn growth_rate(&self, l: f64) -> Result<f64> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Domain {
                what: "population growth rate",
                value: l,
            });
        }
        Ok(self.rate(l))
    }

    #[inline]
    pub(crate) fn rate(&self, l: f64) -> f64 {
        self.r * (1.0 - l / self.capacity) * (l / self.threshold - 1.0)
    }

    pub fn classify_regime(&self) -> Regime {
        let (n_mid, l0) = (self.rate(self.midpoint()), self.l0);
        let tag = if l0 == self.threshold || l0 == self.capacity {
            RegimeTag::Fixed
        } else if l0 < self.threshold {
            RegimeTag::BelowThreshold
        } else if l0 <= self.midpoint() {
            RegimeTag::MidLow
        } else if l0 < self.capacity {
            RegimeTag::MidHigh
        } else {
            RegimeTag::AboveCapacity
        };
        let (n_infinity, eta) = match tag {
            RegimeTag::BelowThreshold => (-self.r, self.r),
            RegimeTag::MidLow | RegimeTag::MidHigh => (0.0, n_mid),
            RegimeTag::AboveCapacity => (0.0, abs(self.rate(l0))),
            RegimeTag::Fixed => (0.0, 0.0),
        };
        Regime {
            tag,
            n_infinity,
            eta,
        }
    }

    /// Long-run labour force implied by the regime.
    pub fn limit_population(&self) -> f64 {
        match self.classify_regime().tag {
            RegimeTag::BelowThreshold => 0.0,
            RegimeTag::Fixed => self.l0,
            _ => self.capacity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    /// `0 < L0 < N`: the population dies out, `n -> -r`.
    BelowThreshold,
    /// `N < L0 <= (N+M)/2`.
    MidLow,
    /// `(N+M)/2 < L0 < M`.
    MidHigh,
    /// `L0 > M`.
    AboveCapacity,
    /// `L0` is `N` or `M`, so `n` is identically zero.
    Fixed,
}

impl RegimeTag {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeTag::BelowThreshold => "below_threshold",
            RegimeTag::MidLow => "mid_low",
            RegimeTag::MidHigh => "mid_high",
            RegimeTag::AboveCapacity => "above_capacity",
            RegimeTag::Fixed => "fixed",
        }
    }
}

/// Long-run behaviour of the growth rate for a given initial labour force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    pub n_infinity: f64,
    /// Uniform bound `|n(t)| <= eta` along the whole trajectory.
    pub eta: f64,
}

/// Integrated labour trajectory with dense output.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationPath {
    pub params: AlleeParams,
    chart: Chart,
    /// Solution in the chart coordinate.
    solution: Solution<1>,
}

/// Coordinate on the invariant interval holding `L0`. Each one maps the
/// interval onto the real line and has a velocity of constant sign, so
/// the computed labour force is monotone and never leaves its interval.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Chart {
    /// `u = ln(L / (N - L))` on `(0, N)`.
    Below { r: f64, n: f64, m: f64 },
    /// `u = ln((L - N) / (M - L))` on `(N, M)`.
    Between { r: f64, n: f64, m: f64 },
    /// `u = ln((L - M) / L)` on `(M, inf)`.
    Above { r: f64, n: f64, m: f64 },
    Fixed { l: f64 },
}

impl Chart {
    fn new(p: &AlleeParams) -> Self {
        let (r, n, m) = (p.r, p.threshold, p.capacity);
        match p.classify_regime().tag {
            RegimeTag::Fixed => Chart::Fixed { l: p.l0 },
            RegimeTag::BelowThreshold => Chart::Below { r, n, m },
            RegimeTag::MidLow | RegimeTag::MidHigh => Chart::Between { r, n, m },
            RegimeTag::AboveCapacity => Chart::Above { r, n, m },
        }
    }

    /// Chart coordinate of `l`; `None` when `l` lies outside the interval.
    fn try_coordinate(&self, l: f64) -> Option<f64> {
        let u = match *self {
            Chart::Below { n, .. } if l > 0.0 && l < n => ln(l / (n - l)),
            Chart::Between { n, m, .. } if l > n && l < m => ln((l - n) / (m - l)),
            Chart::Above { m, .. } if l > m => ln((l - m) / l),
            _ => return None,
        };
        Some(u)
    }

    fn coordinate(&self, l: f64) -> f64 {
        self.try_coordinate(l).unwrap_or(0.0)
    }

    fn labour(&self, u: f64) -> f64 {
        match *self {
            Chart::Below { n, .. } => n / (1.0 + exp(-u)),
            Chart::Between { n, m, .. } => m - (m - n) / (1.0 + exp(u)),
            Chart::Above { m, .. } => m / (1.0 - exp(u)),
            Chart::Fixed { l } => l,
        }
    }

    fn velocity(&self, u: f64) -> f64 {
        let l = self.labour(u);
        match *self {
            Chart::Below { r, m, .. } => -r * (1.0 - l / m),
            Chart::Between { r, n, m } => r * l * (m - n) / (m * n),
            Chart::Above { r, n, .. } => -r * (l / n - 1.0),
            Chart::Fixed { .. } => 0.0,
        }
    }
}

/// One accepted point of a labour trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationSample {
    pub t: f64,
    pub l: f64,
    pub n: f64,
}

/// Default settings for labour integration: it feeds every other series, so
/// it runs tighter than the shared defaults.
pub fn default_options() -> Options {
    Options::with_tolerances(1e-9, 1e-12)
}

/// Integrates the labour equation from `L0` on `[0, t_end]`.
pub fn integrate_population(params: &AlleeParams, t_end: f64, opts: &Options) -> Result<PopulationPath> {
    params.validate()?;
    if !(t_end >= 0.0) {
        return Err(Error::Domain {
            what: "population horizon",
            value: t_end,
        });
    }
    let chart = Chart::new(params);
    let solution = ode::integrate(
        move |_, y: &[f64; 1]| [chart.velocity(y[0])],
        0.0,
        [chart.coordinate(params.l0)],
        t_end,
        opts,
        |_| Control::Continue,
    );

    if let Outcome::Failed(kind) = solution.outcome {
        return Err(Error::Integration {
            t: solution.t_last(),
            kind,
        });
    }
    Ok(PopulationPath {
        params: *params,
        chart,
        solution,
    })
}

impl PopulationPath {
    pub fn t_end(&self) -> f64 {
        self.solution.t_last()
    }

    fn labour(&self, u: f64) -> f64 {
        self.chart.labour(u)
    }

    pub fn len(&self) -> usize {
        self.solution.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solution.t.is_empty()
    }

    pub fn final_labour(&self) -> f64 {
        self.labour(self.solution.y_last()[0])
    }

    pub fn samples(&self) -> impl Iterator<Item = PopulationSample> + '_ {
        self.solution
            .t
            .iter()
            .zip(&self.solution.y)
            .map(|(&t, y)| {
                let l = self.labour(y[0]);
                PopulationSample {
                    t,
                    l,
                    n: self.params.rate(l),
                }
            })
    }

    /// Labour at time `t`; clamps to the ends of the integrated interval.
    pub fn labour_at(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.t_end());
        self.solution
            .eval(t)
            .map(|y| self.labour(y[0]))
            .unwrap_or(self.params.l0)
    }

    pub fn growth_rate_at(&self, t: f64) -> f64 {
        self.params.rate(self.labour_at(t))
    }

    /// First time the labour force reaches `level`, located on the dense
    /// output. `None` if it is not reached within the integrated horizon.
    pub fn crossing_time(&self, level: f64) -> Option<f64> {
        let sol = &self.solution;
        if level == self.params.l0 {
            return Some(sol.t[0]);
        }
        let level = self.chart.try_coordinate(level)?;
        let g0 = sol.y[0][0] - level;
        if g0 == 0.0 {
            return Some(sol.t[0]);
        }
        for (i, seg) in sol.segments.iter().enumerate() {
            let a = sol.y[i][0] - level;
            let b = sol.y[i + 1][0] - level;
            if b == 0.0 {
                return Some(sol.t[i + 1]);
            }
            if (a > 0.0) != (b > 0.0) {
                let (t0, t1) = (sol.t[i], sol.t[i + 1]);
                return roots::bisect(
                    |t| seg.eval(t)[0] - level,
                    t0,
                    t1,
                    Tolerance {
                        abs: 0.0,
                        rel: 0.0,
                        max_iter: 200,
                    },
                );
            }
        }
        None
    }

    /// Cumulative `int_0^t n(s) ds` at each of the (non-decreasing) `times`,
    /// by the trapezoid rule on the dense output with panels no wider than
    /// `max_panel`.
    pub fn integrated_growth(&self, times: &[f64], max_panel: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(times.len());
        let mut acc = 0.0;
        let mut t_prev = 0.0;
        let mut n_prev = self.growth_rate_at(0.0);
        for &t in times {
            let t = t.max(t_prev);
            let span = t - t_prev;
            if span > 0.0 {
                let panels = libm::ceil(span / max_panel).max(1.0) as usize;
                let dt = span / panels as f64;
                for j in 1..=panels {
                    let tj = if j == panels { t } else { t_prev + dt * j as f64 };
                    let nj = self.growth_rate_at(tj);
                    acc += 0.5 * dt * (n_prev + nj);
                    n_prev = nj;
                }
            }
            t_prev = t;
            out.push(acc);
        }
        out
    }
}

/// Convenience wrapper: integrates to `t_end` and locates the first crossing.
pub fn crossing_time(params: &AlleeParams, level: f64, t_end: f64) -> Result<Option<f64>> {
    if !(level > 0.0) {
        return Err(Error::Domain {
            what: "crossing level",
            value: level,
        });
    }
    if params.l0 == level {
        return Ok(Some(0.0));
    }
    let path = integrate_population(params, t_end, &default_options())?;
    Ok(path.crossing_time(level))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::ln;

    fn params(l0: f64) -> AlleeParams {
        AlleeParams::new(0.025, 1.0, 2.0, l0).unwrap()
    }

    #[test]
    fn growth_rate_examples() {
        let p = params(1.0);
        assert_eq!(p.growth_rate(1.0).unwrap(), 0.0);
        assert_eq!(p.growth_rate(2.0).unwrap(), 0.0);
        assert!((p.growth_rate(1.5).unwrap() - 0.003125).abs() < 1e-15);
        assert!(p.growth_rate(0.0).is_err());
        assert!(p.growth_rate(-0.3).is_err());
    }

    #[test]
    fn growth_rate_sign_pattern() {
        let p = params(1.0);
        for i in 1..400 {
            let l = 0.01 * i as f64;
            let n = p.rate(l);
            if l < 1.0 {
                assert!(n < 0.0, "L={l}");
            } else if l > 1.0 && l < 2.0 {
                assert!(n > 0.0, "L={l}");
            } else if l > 2.0 {
                assert!(n < 0.0, "L={l}");
            }
        }
    }

    #[test]
    fn invalid_params_are_rejected() {
        assert!(AlleeParams::new(0.025, 2.0, 1.0, 1.0).is_err());
        assert!(AlleeParams::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(AlleeParams::new(0.025, 1.0, 2.0, 0.0).is_err());
        assert!(AlleeParams::new(0.025, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn regime_classification() {
        let below = params(0.5).classify_regime();
        assert_eq!(below.tag, RegimeTag::BelowThreshold);
        assert_eq!(below.n_infinity, -0.025);
        assert_eq!(below.eta, 0.025);

        let fixed = params(1.0).classify_regime();
        assert_eq!(fixed.tag, RegimeTag::Fixed);
        assert_eq!(fixed.n_infinity, 0.0);
        assert_eq!(params(2.0).classify_regime().tag, RegimeTag::Fixed);

        let above = params(3.0).classify_regime();
        assert_eq!(above.tag, RegimeTag::AboveCapacity);
        assert_eq!(above.n_infinity, 0.0);
        assert!((above.eta - 0.025 * 0.5 * 2.0).abs() < 1e-15);

        assert_eq!(params(1.5).classify_regime().tag, RegimeTag::MidLow);
        assert_eq!(params(1.7).classify_regime().tag, RegimeTag::MidHigh);
        assert!((params(1.2).classify_regime().eta - 0.003125).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_is_preserved_exactly() {
        let path = integrate_population(&params(1.0), 500.0, &default_options()).unwrap();
        assert!(path.samples().all(|s| s.l == 1.0 && s.n == 0.0));
    }

    #[test]
    fn below_threshold_decreases_to_zero() {
        let path = integrate_population(&params(0.5), 2000.0, &default_options()).unwrap();
        let samples: Vec<_> = path.samples().collect();
        for w in samples.windows(2) {
            assert!(w[1].l < w[0].l);
            assert!(w[1].n <= w[0].n, "n must be non-increasing");
        }
        let last = samples.last().unwrap();
        assert!(last.l < 1e-9 * 2.0);
        assert!((last.n + 0.025).abs() < 1e-9);
    }

    #[test]
    fn between_threshold_and_capacity_increases_to_capacity() {
        let p = params(1.5);
        let path = integrate_population(&p, 2000.0, &default_options()).unwrap();
        let samples: Vec<_> = path.samples().collect();
        for w in samples.windows(2) {
            assert!(w[1].l >= w[0].l - 1e-12, "{} -> {}", w[0].l, w[1].l);
        }
        assert!((samples.last().unwrap().l - 2.0).abs() < 1e-9 * 2.0);
        // Independent high-accuracy reference at t = 100.
        let reference = integrate_population(&p, 100.0, &Options::with_tolerances(1e-12, 1e-14)).unwrap();
        assert!((path.labour_at(100.0) - reference.final_labour()).abs() < 1e-8);
    }

    #[test]
    fn eta_bounds_growth_rate_along_trajectories() {
        for l0 in [0.2, 0.9, 1.05, 1.5, 1.9, 2.5, 6.0] {
            let p = params(l0);
            let eta = p.classify_regime().eta;
            let path = integrate_population(&p, 2000.0, &default_options()).unwrap();
            for s in path.samples() {
                assert!(abs(s.n) <= eta + 1e-12, "L0={l0} t={} n={}", s.t, s.n);
            }
        }
    }

    #[test]
    fn limits_match_regime() {
        for l0 in [0.3, 1.2, 1.8, 4.0] {
            let p = params(l0);
            let path = integrate_population(&p, 2000.0, &default_options()).unwrap();
            let l_end = path.final_labour();
            assert!(abs(l_end - p.limit_population()) < 1e-9 * p.capacity, "L0={l0}: {l_end}");
        }
    }

    #[test]
    fn crossing_time_examples() {
        let mid = params(1.5);
        assert_eq!(crossing_time(&mid, 1.5, 100.0).unwrap(), Some(0.0));
        assert_eq!(crossing_time(&params(0.5), 1.5, 2000.0).unwrap(), None);
        let t_bar = crossing_time(&params(1.1), 1.5, 2000.0).unwrap().unwrap();
        assert!(t_bar > 0.0);
        let path = integrate_population(&params(1.1), 2000.0, &default_options()).unwrap();
        assert!((path.labour_at(t_bar) - 1.5).abs() < 1e-9);
        // Separable closed form for N = 1, M = 2:
        // 2 / (L (2 - L)(L - 1)) = -1/L + 2/(L - 1) + 1/(2 - L).
        let antiderivative = |l: f64| -ln(l) + 2.0 * ln(l - 1.0) - ln(2.0 - l);
        let exact = (antiderivative(1.5) - antiderivative(1.1)) / 0.025;
        assert!((t_bar - exact).abs() < 1e-6 * exact, "{t_bar} vs {exact}");
    }

    #[test]
    fn quadrature_of_growth_rate_matches_log_labour() {
        for l0 in [0.5, 1.3, 3.0] {
            let p = params(l0);
            let path = integrate_population(&p, 2000.0, &default_options()).unwrap();
            let times = [0.0, 10.0, 150.0, 700.0, 2000.0];
            let integrals = path.integrated_growth(&times, 0.05);
            for (t, i) in times.iter().zip(&integrals) {
                let exact = ln(path.labour_at(*t) / l0);
                assert!(abs(i - exact) < 1e-5, "L0={l0} t={t}: {i} vs {exact}");
            }
        }
    }
}
