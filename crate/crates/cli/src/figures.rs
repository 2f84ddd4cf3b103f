//! The three reference scenarios behind the trajectory figures.
//!
//! Capital and consumption paths for a labour force starting below the
//! threshold (`L0 = N / 2`) and between threshold and capacity
//! (`L0 = (N + M) / 2`), both on their saddle paths; and the blow-up run,
//! which keeps the below-threshold initial state but raises the intrinsic
//! rate above depreciation.

use ramsey_allee_core::dynamics::EconomyState;
use ramsey_allee_core::steadystate::{self, SteadyState};

use crate::config::{InitialConsumption, ScenarioConfig};
use crate::run::{self, Run};
use crate::Error;

/// Intrinsic rate of the blow-up scenario.
pub const BLOW_UP_RATE: f64 = 0.085;

#[derive(Debug, Clone)]
pub struct FigureRuns {
    pub l0_low: f64,
    pub l0_high: f64,
    pub low: Run,
    pub high: Run,
    pub steady_low: SteadyState,
    pub steady_high: SteadyState,
    pub blow_up: Run,
    pub blow_up_horizon: f64,
}

pub fn low_and_high_l0(config: &ScenarioConfig) -> (f64, f64) {
    let p = &config.population;
    (0.5 * p.threshold, p.midpoint())
}

/// Horizon of the blow-up run: long enough for the guard to fire.
pub fn blow_up_horizon(config: &ScenarioConfig) -> f64 {
    (10.0 * config.solver.t_end).max(1e4)
}

pub fn figure_runs(config: &ScenarioConfig) -> Result<FigureRuns, Error> {
    let (l0_low, l0_high) = low_and_high_l0(config);
    let mut base = config.clone();
    base.c0 = InitialConsumption::Shoot;
    let low_cfg = base.with_value("population.l0", l0_low)?;
    let high_cfg = base.with_value("population.l0", l0_high)?;
    let low = run::run_scenario(&low_cfg)?;
    let high = run::run_scenario(&high_cfg)?;
    let steady_low = steadystate::case2_steady_state(
        &config.production,
        &config.economy,
        low_cfg.population.classify_regime().n_infinity,
    )?;
    let steady_high = steadystate::case2_steady_state(
        &config.production,
        &config.economy,
        high_cfg.population.classify_regime().n_infinity,
    )?;

    let blow_cfg = low_cfg
        .with_value("population.r", BLOW_UP_RATE)?
        .with_value("initial.c0", low.c0)?;
    let blow_up_horizon = blow_up_horizon(config);
    let blow_up = run::run_until(&blow_cfg, blow_up_horizon)?;
    Ok(FigureRuns {
        l0_low,
        l0_high,
        low,
        high,
        steady_low,
        steady_high,
        blow_up,
        blow_up_horizon,
    })
}

/// States of `run` on `points + 1` evenly spaced times over its span.
pub fn resample(run: &Run, points: usize) -> Vec<EconomyState> {
    let traj = &run.trajectory;
    let (t0, t1) = (traj.first().t, traj.last().t);
    (0..=points)
        .filter_map(|i| {
            let t = if i == points {
                t1
            } else {
                t0 + (t1 - t0) * i as f64 / points as f64
            };
            traj.eval(t)
        })
        .collect()
}
