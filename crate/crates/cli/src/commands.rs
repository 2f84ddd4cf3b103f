use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use ramsey_allee_core::dynamics;
use ramsey_allee_core::steadystate::{self, SteadyState};

use crate::config::{default_svg_name, ScenarioConfig};
use crate::csv::{self, number};
use crate::figures;
use crate::run::{self, Run};
use crate::svg::{self, Series};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Simulate,
    SteadyState,
    Bounds,
    Shoot,
    Sweep,
    ReproduceFigures,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub svg: bool,
}

/// What a command printed and which files it wrote.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

impl Report {
    fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<(), Error> {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        self.files.push(path);
        Ok(())
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.stdout.push_str(text.as_ref());
        self.stdout.push('\n');
    }
}

pub fn execute(command: Command, config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, Error> {
    fs::create_dir_all(&opts.out_dir).map_err(|source| Error::Io {
        path: opts.out_dir.clone(),
        source,
    })?;
    match command {
        Command::Simulate => simulate(config, opts),
        Command::SteadyState => steady_state(config, opts),
        Command::Bounds => bounds(config, opts),
        Command::Shoot => shoot(config, opts),
        Command::Sweep => sweep(config, opts),
        Command::ReproduceFigures => reproduce_figures(config, opts),
    }
}

fn describe_end(report: &mut Report, run: &Run) {
    let end = run.trajectory.last();
    report.line(format!("termination: {}", run.trajectory.termination));
    report.line(format!(
        "final state: t = {:?}, k = {:?}, c = {:?}, L = {:?}",
        end.t, end.k, end.c, end.l
    ));
}

fn trajectory_svg(title: &str, run: &Run) -> String {
    let s = &run.trajectory.samples;
    svg::line_plot(
        title,
        "t",
        "per-labour value",
        &[
            Series::new("k", s.iter().map(|e| (e.t, e.k)).collect()),
            Series::new("c", s.iter().map(|e| (e.t, e.c)).collect()),
        ],
    )
}

fn simulate(config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, Error> {
    let run = run::run_scenario(config)?;
    let mut report = Report::default();
    report.line(format!("c0 = {}", run.c0));
    describe_end(&mut report, &run);
    let table = csv::trajectory_table(&run.trajectory, &run.derived, config.output.stride);
    report.write(&opts.out_dir, &config.output.csv, &table)?;
    let svg_name = match (&config.output.svg, opts.svg) {
        (Some(name), _) => Some(name.clone()),
        (None, true) => Some(default_svg_name(&config.output.csv)),
        (None, false) => None,
    };
    if let Some(name) = svg_name {
        report.write(&opts.out_dir, &name, &trajectory_svg("Trajectory", &run))?;
    }
    Ok(report)
}

fn steady_row(label: &str, s: &SteadyState) -> Vec<String> {
    vec![
        label.into(),
        s.case.name().into(),
        number(s.n_infinity),
        number(s.k_inf),
        number(s.c_inf),
        number(s.x_inf),
        number(s.z_inf),
        String::new(),
    ]
}

fn value_row(label: &str, value: f64) -> Vec<String> {
    let mut row = vec![label.to_string()];
    row.extend((0..6).map(|_| String::new()));
    row.push(number(value));
    row
}

pub const STEADY_HEADER: [&str; 8] = ["record", "case", "n_infinity", "k_inf", "c_inf", "x_inf", "z_inf", "value"];

fn steady_state(config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, Error> {
    let (spec, rp) = (&config.production, &config.economy);
    let r = config.population.r;
    let cmp = steadystate::compare_regimes(spec, rp, r)?;
    let solow_shrinking = steadystate::case1_steady_state(spec, rp.delta, -r)?;
    let solow_stationary = steadystate::case1_steady_state(spec, rp.delta, 0.0)?;
    let critical = spec.curvature_gap_critical_point();

    let mut rows = vec![
        steady_row("shrinking", &cmp.shrinking),
        steady_row("stationary", &cmp.stationary),
        steady_row("solow_shrinking", &solow_shrinking),
        steady_row("solow_stationary", &solow_stationary),
        value_row("D_c", cmp.d_c),
        value_row("D_x", cmp.d_x),
        value_row("D_c_lower_bound", cmp.d_c_lower_bound),
    ];
    if let Some(k) = critical {
        rows.push(value_row("curvature_gap_critical_point", k));
    }

    let mut report = Report::default();
    for (label, s) in [("n_inf = -r", &cmp.shrinking), ("n_inf = 0", &cmp.stationary)] {
        report.line(format!(
            "{label}: {} k_inf = {} c_inf = {} x_inf = {} z_inf = {}",
            s.case.name(),
            s.k_inf,
            s.c_inf,
            s.x_inf,
            s.z_inf
        ));
    }
    report.line(format!("D_c = {}", cmp.d_c));
    report.line(format!("D_x = {}", cmp.d_x));
    report.line(format!("D_c lower bound = {}", cmp.d_c_lower_bound));
    if let Some(k) = critical {
        report.line(format!("curvature gap critical point = {k}"));
    }
    report.write(&opts.out_dir, "steady_state.csv", &csv::table(&STEADY_HEADER, &rows))?;
    Ok(report)
}

fn bounds(config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, Error> {
    let run = run::run_scenario(config)?;
    let violations = dynamics::sandwich_violations(&run.trajectory, &run.derived);
    let mut report = Report::default();
    report.line(format!("c0 = {}", run.c0));
    describe_end(&mut report, &run);
    report.line(format!("samples: {}", run.trajectory.len()));
    report.line(format!("capital sandwich violations: {}", violations.capital));
    report.line(format!("consumption upper-bound violations: {}", violations.consumption_upper));
    let table = csv::trajectory_table(&run.trajectory, &run.derived, config.output.stride);
    report.write(&opts.out_dir, "bounds.csv", &table)?;
    if opts.svg {
        let s = &run.trajectory.samples;
        let d = &run.derived;
        let plot = svg::line_plot(
            "Capital and its comparison bounds",
            "t",
            "capital per labour",
            &[
                Series::new("k", s.iter().map(|e| (e.t, e.k)).collect()),
                Series::new("k_lower", s.iter().zip(d).map(|(e, d)| (e.t, d.k_lower)).collect()),
                Series::new("k_upper", s.iter().zip(d).map(|(e, d)| (e.t, d.k_upper)).collect()),
            ],
        );
        report.write(&opts.out_dir, "bounds.svg", &plot)?;
    }
    Ok(report)
}

fn shoot(config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, Error> {
    let mut cfg = config.clone();
    cfg.c0 = crate::config::InitialConsumption::Shoot;
    let run = run::run_scenario(&cfg)?;
    let mut report = Report::default();
    report.line(format!("c0 = {}", run.c0));
    report.line(format!("re-shots: {}", run.restarts));
    describe_end(&mut report, &run);
    let table = csv::trajectory_table(&run.trajectory, &run.derived, config.output.stride);
    report.write(&opts.out_dir, "shoot.csv", &table)?;
    if opts.svg {
        report.write(&opts.out_dir, "shoot.svg", &trajectory_svg("Saddle path", &run))?;
    }
    Ok(report)
}

/// Every grid point in row-major order (the first axis varies slowest).
pub fn sweep_points(config: &ScenarioConfig) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for axis in &config.sweep {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

const SWEEP_SUMMARY: [&str; 9] = [
    "k_inf",
    "c_inf",
    "x_inf",
    "D_c_positive",
    "D_x_positive",
    "k_end",
    "c_end",
    "t_end",
    "termination",
];

fn sweep_row(config: &ScenarioConfig, point: &[f64]) -> Vec<String> {
    let mut row: Vec<String> = point.iter().map(|&v| number(v)).collect();
    let mut cfg = config.clone();
    for (axis, &v) in config.sweep.iter().zip(point) {
        match cfg.with_value(&axis.key, v) {
            Ok(c) => cfg = c,
            Err(_) => {
                row.extend((0..SWEEP_SUMMARY.len() - 1).map(|_| String::new()));
                row.push("error".into());
                return row;
            }
        }
    }
    let (spec, rp) = (&cfg.production, &cfg.economy);
    let n_inf = cfg.population.classify_regime().n_infinity;
    match steadystate::case2_steady_state(spec, rp, n_inf) {
        Ok(s) => row.extend([number(s.k_inf), number(s.c_inf), number(s.x_inf)]),
        Err(_) => row.extend((0..3).map(|_| String::new())),
    }
    match steadystate::compare_regimes(spec, rp, cfg.population.r) {
        Ok(c) => row.extend([(c.d_c > 0.0).to_string(), (c.d_x > 0.0).to_string()]),
        Err(_) => row.extend(["na".to_string(), "na".to_string()]),
    }
    match run::run_scenario(&cfg) {
        Ok(run) => {
            let end = run.trajectory.last();
            row.extend([number(end.k), number(end.c), number(end.t)]);
            row.push(run.trajectory.termination.tag().into());
        }
        Err(_) => {
            row.extend((0..3).map(|_| String::new()));
            row.push("error".into());
        }
    }
    row
}

fn sweep(config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, Error> {
    let points = sweep_points(config);
    let rows: Vec<Vec<String>> = points.par_iter().map(|p| sweep_row(config, p)).collect();
    let mut header: Vec<&str> = config.sweep.iter().map(|a| a.key.as_str()).collect();
    header.extend(SWEEP_SUMMARY);
    let mut report = Report::default();
    report.line(format!("grid points: {}", rows.len()));
    let failed = rows.iter().filter(|r| r.last().is_some_and(|s| s == "error")).count();
    report.line(format!("points with errors: {failed}"));
    report.write(&opts.out_dir, "sweep.csv", &csv::table(&header, &rows))?;
    Ok(report)
}

const FIGURE_POINTS: usize = 1000;

fn reproduce_figures(config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, Error> {
    let figs = figures::figure_runs(config)?;
    let low = figures::resample(&figs.low, FIGURE_POINTS);
    let high = figures::resample(&figs.high, FIGURE_POINTS);
    let label = |what: &str, l0: f64| format!("{what}_L0_{l0}");

    let mut report = Report::default();
    for (what, pick) in [("k", 0usize), ("c", 1usize)] {
        let value = |s: &dynamics::EconomyState| if pick == 0 { s.k } else { s.c };
        let header = ["t".to_string(), label(what, figs.l0_low), label(what, figs.l0_high)];
        let rows: Vec<Vec<String>> = low
            .iter()
            .zip(&high)
            .map(|(a, b)| vec![number(a.t), number(value(a)), number(value(b))])
            .collect();
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        let name = if pick == 0 { "figure1" } else { "figure2" };
        report.write(&opts.out_dir, &format!("{name}.csv"), &csv::table(&header_refs, &rows))?;
        if opts.svg {
            let plot = svg::line_plot(
                if pick == 0 { "Capital per labour" } else { "Consumption per labour" },
                "t",
                what,
                &[
                    Series::new(&header[1], low.iter().map(|s| (s.t, value(s))).collect()),
                    Series::new(&header[2], high.iter().map(|s| (s.t, value(s))).collect()),
                ],
            );
            report.write(&opts.out_dir, &format!("{name}.svg"), &plot)?;
        }
    }
    let table = csv::trajectory_table(&figs.blow_up.trajectory, &figs.blow_up.derived, config.output.stride);
    report.write(&opts.out_dir, "figure3.csv", &table)?;
    if opts.svg {
        report.write(&opts.out_dir, "figure3.svg", &trajectory_svg("Blow-up", &figs.blow_up))?;
    }

    for (l0, run, steady) in [
        (figs.l0_low, &figs.low, &figs.steady_low),
        (figs.l0_high, &figs.high, &figs.steady_high),
    ] {
        let end = run.trajectory.last();
        report.line(format!(
            "L0 = {l0}: c0 = {}, k(T) = {} (k_inf = {}), c(T) = {} (c_inf = {})",
            run.c0, end.k, steady.k_inf, end.c, steady.c_inf
        ));
    }
    report.line(format!(
        "blow-up run (r = {}, horizon {}): {}",
        figures::BLOW_UP_RATE,
        figs.blow_up_horizon,
        figs.blow_up.trajectory.termination
    ));
    Ok(report)
}
