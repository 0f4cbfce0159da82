use std::path::PathBuf;
use std::process::ExitCode;

use bidisc::scenario::Scenario;
use bidisc::Error;
use bidisc_cli::commands::{self, exit_code, Common, DilationOutput, DistanceInput, Report};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bidisc", version, about = "Boundary behaviour of holomorphic self-maps of the bidisc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Shared {
    /// Emit line-delimited JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Seed of the sampling stream (overrides the scenario).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance of boundary-limit estimates (overrides the scenario).
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Poincare distance in the disc or Kobayashi distance in the bidisc.
    Distance {
        #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["Z", "W"], conflicts_with = "bidisc", required_unless_present = "bidisc")]
        disc: Option<Vec<String>>,
        #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["Z1,Z2", "W1,W2"])]
        bidisc: Option<Vec<String>>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Boundary dilation coefficient of a disc map, or of a scenario map along its geodesic.
    Dilation {
        /// Scenario file; reports lambda_g and the component coefficients.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, conflicts_with = "scenario")]
        map: Option<String>,
        /// Boundary point of the disc (default 1).
        #[arg(long, requires = "map", allow_hyphen_values = true)]
        at: Option<String>,
        /// Print the schedule of difference quotients as t,value columns.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        shared: Shared,
    },
    /// Busemann function of the scenario geodesic at a point.
    Busemann {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, value_name = "Z1,Z2", allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        shared: Shared,
    },
    /// Sampled check of the Julia inequality.
    Julia {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[command(flatten)]
        shared: Shared,
    },
    /// Incremental ratios along curves and their bounds on Koranyi regions.
    Jwc {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[command(flatten)]
        shared: Shared,
    },
    /// Limits of a test function along admissible and inadmissible curves.
    Lindelof {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[command(flatten)]
        shared: Shared,
    },
    /// Classification, Wolff sets and target set of a fixed-point-free map.
    Dynamics {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[command(flatten)]
        shared: Shared,
    },
    /// Run the acceptance suite on a corpus directory.
    Verify {
        #[arg(default_value = "corpus/default")]
        corpus: PathBuf,
        #[command(flatten)]
        shared: Shared,
    },
}

enum Output {
    Report(Report),
    Text(String),
}

fn run(command: Command) -> (Shared, Result<Output, Error>) {
    let load = |s: &ScenarioArg| Scenario::load(&s.scenario);
    let common = |shared: &Shared| Common {
        seed: shared.seed,
        tol: shared.tol,
    };
    match command {
        Command::Distance { disc, bidisc, shared } => {
            let input = match (&disc, &bidisc) {
                (Some(d), _) => DistanceInput::Disc(&d[0], &d[1]),
                (None, Some(b)) => DistanceInput::Bidisc(&b[0], &b[1]),
                (None, None) => unreachable!("clap requires one of --disc or --bidisc"),
            };
            let result = commands::distance(input, &common(&shared)).map(Output::Report);
            (shared, result)
        }
        Command::Dilation { scenario, map, at, csv, shared } => {
            let result = (|| {
                let scenario = scenario.as_deref().map(Scenario::load).transpose()?;
                Ok(match commands::dilation(scenario.as_ref(), map.as_deref(), at.as_deref(), csv, &common(&shared))? {
                    DilationOutput::Report(r) => Output::Report(r),
                    DilationOutput::Csv(text) => Output::Text(text),
                })
            })();
            (shared, result)
        }
        Command::Busemann { scenario, point, shared } => {
            let result = load(&scenario).and_then(|s| commands::busemann(&s, &point, &common(&shared)));
            (shared, result.map(Output::Report))
        }
        Command::Julia { scenario, shared } => {
            let result = load(&scenario).and_then(|s| commands::julia(&s, &common(&shared)));
            (shared, result.map(Output::Report))
        }
        Command::Jwc { scenario, shared } => {
            let result = load(&scenario).and_then(|s| commands::jwc(&s, &common(&shared)));
            (shared, result.map(Output::Report))
        }
        Command::Lindelof { scenario, shared } => {
            let result = load(&scenario).and_then(|s| commands::lindelof(&s, &common(&shared)));
            (shared, result.map(Output::Report))
        }
        Command::Dynamics { scenario, shared } => {
            let result = load(&scenario).and_then(|s| commands::dynamics(&s, &common(&shared)));
            (shared, result.map(Output::Report))
        }
        Command::Verify { corpus, shared } => {
            let result = commands::verify(&corpus, &common(&shared));
            (shared, result.map(Output::Report))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (shared, result) = run(cli.command);
    match result {
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(report)) => {
            if shared.json {
                print!("{}", report.to_json_lines());
            } else {
                print!("{}", report.to_human());
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(error) => {
            let code = exit_code(&error);
            if shared.json {
                let kind = match code {
                    3 => "hypothesis",
                    2 => "input",
                    _ => "failure",
                };
                println!(
                    "{}",
                    bidisc_cli::report::Record::new("error")
                        .text("kind", kind)
                        .text("message", error.to_string())
                        .to_json()
                );
            }
            eprintln!("error: {error}");
            ExitCode::from(code as u8)
        }
    }
}
