use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ramsey_allee::{execute, load_config, Command, RunOptions};

/// Ramsey growth with Allee-effect labour dynamics.
#[derive(Debug, Parser)]
#[command(name = "ramsey-allee", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Scenario file.
    #[arg(long)]
    config: PathBuf,

    /// Directory for the emitted files.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,

    /// Overrides `solver.t_end`.
    #[arg(long)]
    t_end: Option<f64>,

    /// Overrides `solver.rtol`.
    #[arg(long)]
    rtol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(&cli.config).and_then(|mut config| {
        if let Some(t_end) = cli.t_end {
            config = config.with_value("solver.t_end", t_end)?;
        }
        if let Some(rtol) = cli.rtol {
            config = config.with_value("solver.rtol", rtol)?;
        }
        let opts = RunOptions {
            out_dir: cli.out.clone(),
            svg: cli.svg,
        };
        execute(cli.command, &config, &opts)
    });
    match result {
        Ok(report) => {
            print!("{}", report.stdout);
            for file in &report.files {
                println!("wrote {}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("ramsey-allee: {err}");
            ExitCode::FAILURE
        }
    }
}
