use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use irs_hetnet::{Carrier, Model};
use irs_hetnet_sim::validate::{model_gap_config, oracle_config, render_report, ValidationRun};
use irs_hetnet_sim::{csv_out, link, load_scenario, run_association_sweep, run_capacity_sweep};
use irs_hetnet_sim::{Result, Scenario, SimError, SweepRow};

#[derive(Debug, Parser)]
#[command(
    name = "irs-hetnet",
    version,
    about = "Two-tier cellular link budgets, association and capacity with and without a reflecting surface"
)]
struct Cli {
    /// Scenario document (TOML). Omitted keys take the reference defaults.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Restrict to one link model (default: both).
    #[arg(long, global = true, value_enum)]
    model: Option<ModelArg>,
    /// Oracle seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Oracle trial count.
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Conventional,
    Irs,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Conventional => Model::Conventional,
            ModelArg::Irs => Model::Irs,
        }
    }
}

#[derive(Debug, clap::Args)]
struct IrsOverrides {
    /// Micro transmit power on the surface-assisted link, watts.
    #[arg(long)]
    irs_power: Option<f64>,
    /// Scattering elements per side (M = N).
    #[arg(long)]
    elements: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Received power and association at a single device position.
    Link {
        /// Device distance from the micro station, meters.
        #[arg(long, default_value_t = 10.0)]
        distance: f64,
        /// Evaluate one carrier instead of the scenario's list, GHz.
        #[arg(long)]
        carrier_ghz: Option<f64>,
        #[command(flatten)]
        irs: IrsOverrides,
    },
    /// Association probability versus device distance (CSV).
    Assoc {
        #[command(flatten)]
        irs: IrsOverrides,
    },
    /// Supported devices versus device density (CSV).
    Capacity {
        #[command(flatten)]
        irs: IrsOverrides,
    },
    /// Monte Carlo check of the association formula.
    Validate,
}

fn models(cli: &Cli) -> Vec<Model> {
    match cli.model {
        Some(m) => vec![m.into()],
        None => Model::ALL.to_vec(),
    }
}

fn apply(mut s: Scenario, o: &IrsOverrides) -> Result<Scenario> {
    if let Some(p) = o.irs_power {
        s = s.with_irs_power(p)?;
    }
    if let Some(m) = o.elements {
        s = s.with_elements(m)?;
    }
    Ok(s)
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| SimError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| SimError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let scenario = match &cli.scenario {
        Some(path) => load_scenario(path)?,
        None => Scenario::default(),
    };
    let output = cli.output.as_deref();
    match &cli.command {
        Command::Link {
            distance,
            carrier_ghz,
            irs,
        } => {
            let s = apply(scenario, irs)?;
            let carriers = match carrier_ghz {
                Some(f) => vec![Carrier::from_ghz(*f)
                    .map_err(|e| SimError::config("carrier_ghz", e.to_string()))?],
                None => s.carriers.clone(),
            };
            let mut points = Vec::new();
            for &model in &models(cli) {
                for &c in &carriers {
                    points.push(link::evaluate(&s, model, c, *distance)?);
                }
            }
            emit(output, &link::render(&points))
        }
        Command::Assoc { irs } => {
            let s = apply(scenario, irs)?;
            let mut rows: Vec<SweepRow> = Vec::new();
            for model in models(cli) {
                rows.extend(run_association_sweep(&s, &s.distance_sweep, model)?);
            }
            emit(output, &csv_out::render(&rows))
        }
        Command::Capacity { irs } => {
            let s = apply(scenario, irs)?;
            let mut rows: Vec<SweepRow> = Vec::new();
            for model in models(cli) {
                rows.extend(run_capacity_sweep(&s, &s.density_sweep, model)?);
            }
            emit(output, &csv_out::render(&rows))
        }
        Command::Validate => {
            let trials = cli.trials.unwrap_or(scenario.oracle.trials);
            let seed = cli.seed.unwrap_or(scenario.oracle.seed);
            let runs = [
                ValidationRun::new(oracle_config(&scenario, trials, seed)?)?,
                ValidationRun::new(model_gap_config(&scenario, trials, seed)?)?,
            ];
            emit(output, &render_report(&runs))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
