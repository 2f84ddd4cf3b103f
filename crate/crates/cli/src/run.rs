//! Runs one scenario: picks the initial consumption, integrates and derives
//! the reporting columns.

use ramsey_allee_core::dynamics::{self, DerivedSample, ShootingOptions};
use ramsey_allee_core::ode::Options;
use ramsey_allee_core::{EconomyState, Trajectory};

use crate::config::{InitialConsumption, ScenarioConfig};
use crate::Error;

#[derive(Debug, Clone)]
pub struct Run {
    pub c0: f64,
    /// Number of re-shots along a saddle path; zero for a given `c0`.
    pub restarts: usize,
    pub trajectory: Trajectory,
    pub derived: Vec<DerivedSample>,
}

pub fn solver_options(config: &ScenarioConfig) -> Options {
    Options::with_tolerances(config.solver.rtol, config.solver.atol)
}

/// Shooting needs tighter tolerances than plain simulation; the configured
/// ones are used only when they are tighter still.
pub fn shooting_options(config: &ScenarioConfig) -> ShootingOptions {
    let defaults = ShootingOptions::default();
    ShootingOptions {
        horizon: config.shooting_horizon,
        ode: Options::with_tolerances(
            config.solver.rtol.min(defaults.ode.rtol),
            config.solver.atol.min(defaults.ode.atol),
        ),
        ..defaults
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<Run, Error> {
    run_until(config, config.solver.t_end)
}

pub fn run_until(config: &ScenarioConfig, t_end: f64) -> Result<Run, Error> {
    let (spec, rp, ap) = (&config.production, &config.economy, &config.population);
    let opts = solver_options(config);
    let (c0, restarts, trajectory) = match config.c0 {
        InitialConsumption::Shoot => {
            let path = dynamics::saddle_path(spec, rp, ap, config.k0, t_end, &shooting_options(config))?;
            (path.c0, path.restarts.len(), path.trajectory)
        }
        InitialConsumption::Value(c0) => {
            let initial = EconomyState::new(0.0, config.k0, c0, ap.l0);
            (c0, 0, dynamics::integrate_full(spec, rp, ap, &initial, t_end, &opts)?)
        }
    };
    let derived = dynamics::annotate(spec, rp, ap, &trajectory, &opts)?;
    Ok(Run {
        c0,
        restarts,
        trajectory,
        derived,
    })
}
