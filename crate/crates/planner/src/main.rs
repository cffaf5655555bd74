use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use greymop::{Algorithm1Options, FeeMode, GreyNumber, PositionSpec};
use greyplan::document::from_text;
use greyplan::output::to_pretty;
use greyplan::report::{Algorithm2Params, FrontierParams, SolveParams, WeightsParams};
use greyplan::{run_report, PlannerError, ReportRequest, StartRequest, StepRequest, Store};

#[derive(Parser)]
#[command(name = "greyplan", version, about = "Grey multi-objective planning")]
struct Cli {
    /// Storage directory for models and session journals.
    #[arg(long, env = "GREYPLAN_STORE", default_value = "greyplan-store", global = true)]
    store: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct PositionArgs {
    /// Uniform whitening position for every grey entry.
    #[arg(long, conflicts_with_all = ["rho", "beta", "delta"])]
    theta: Option<f64>,
    /// Price position.
    #[arg(long, requires_all = ["beta", "delta"])]
    rho: Option<f64>,
    /// Resource position.
    #[arg(long, requires_all = ["rho", "delta"])]
    beta: Option<f64>,
    /// Consumption position.
    #[arg(long, requires_all = ["rho", "beta"])]
    delta: Option<f64>,
}

impl PositionArgs {
    fn spec(&self) -> Option<PositionSpec> {
        match (self.theta, self.rho, self.beta, self.delta) {
            (Some(t), ..) => Some(PositionSpec::Theta(t)),
            (None, Some(rho), Some(beta), Some(delta)) => Some(PositionSpec::Uniform { rho, beta, delta }),
            _ => None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate and store a model document; prints its handle.
    Ingest { file: PathBuf },
    /// Print the canonical document for a handle.
    Export { handle: String },
    /// Solve a grey linear program at whitening positions.
    SolvePositioned {
        /// Document path or stored handle.
        model: String,
        #[command(flatten)]
        position: PositionArgs,
    },
    /// Entropy weights of a multi-objective model.
    Weights {
        model: String,
        /// JSON array of admissible points; sampled when omitted.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long, value_delimiter = ',')]
        preferences: Option<Vec<f64>>,
    },
    /// Entropy-weighted scalarization solved at theta.
    Algorithm1 {
        model: String,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        /// Fixed objective weights, skipping entropy weighting.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        preferences: Option<Vec<f64>>,
    },
    /// Max-min satisfaction solve at theta.
    Algorithm2 {
        model: String,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        preferences: Option<Vec<f64>>,
        /// Round satisfaction coefficients to two significant figures.
        #[arg(long)]
        reproduce_paper_rounding: bool,
    },
    /// Epsilon-constraint profit/risk frontier of a portfolio.
    Frontier {
        portfolio: String,
        /// Ascending risk caps in money units.
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        /// Fixed-charge fees by regime enumeration.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        purchase_cap: bool,
        /// Also write the frontier table to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Interactive pleased-degree sessions.
    #[command(subcommand)]
    Session(SessionCommand),
    /// Run the HTTP API.
    Serve {
        #[arg(long, env = "GREYPLAN_LISTEN", default_value = "127.0.0.1:8080")]
        listen: String,
    },
}

#[derive(Subcommand)]
enum SessionCommand {
    Start {
        model: String,
        /// Target floor mu0 of the pleased set [mu0, 1].
        #[arg(long)]
        mu0: f64,
        #[arg(long, default_value_t = 0.5)]
        theta_lambda: f64,
        /// Risk weight as `lower,upper`.
        #[arg(long, value_parser = parse_grey)]
        risk_weight: Option<GreyNumber>,
        #[arg(long)]
        purchase_cap: bool,
        #[command(flatten)]
        position: PositionArgs,
    },
    Step {
        id: String,
        #[arg(long, value_parser = parse_grey)]
        risk_weight: Option<GreyNumber>,
        #[arg(long)]
        theta_lambda: Option<f64>,
        #[command(flatten)]
        position: PositionArgs,
    },
    Show { id: String },
    Abandon { id: String },
}

fn parse_grey(s: &str) -> Result<GreyNumber, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums = parts
        .iter()
        .map(|p| p.parse::<f64>().map_err(|e| format!("{p}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match nums[..] {
        [a] => Ok(GreyNumber::white(a)),
        [a, b] => GreyNumber::new(a, b).map_err(|e| e.to_string()),
        _ => Err("expected `lower,upper`".into()),
    }
}

/// An existing file is ingested; anything else is taken as a handle.
fn resolve_model(store: &Store, arg: &str) -> greyplan::Result<String> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)?;
        Ok(store.ingest(&text)?.0)
    } else {
        Ok(arg.to_string())
    }
}

fn read_points(path: &Option<PathBuf>) -> greyplan::Result<Option<Vec<Vec<f64>>>> {
    path.as_ref()
        .map(|p| from_text(&std::fs::read_to_string(p)?))
        .transpose()
}

fn report(store: &Store, model: &str, req: ReportRequest) -> greyplan::Result<greyplan::Report> {
    let handle = resolve_model(store, model)?;
    run_report(store, &handle, &req)
}

/// Writes a line to stdout; a closed pipe ends output quietly.
fn emit(text: String) -> greyplan::Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

fn run(cli: Cli) -> greyplan::Result<()> {
    let store = Store::open(&cli.store)?;
    match cli.command {
        Command::Ingest { file } => {
            let (handle, doc) = store.ingest(&std::fs::read_to_string(file)?)?;
            emit(format!("{handle} {}", doc.kind().name()))?;
        }
        Command::Export { handle } => emit(store.export(&handle)?)?,
        Command::SolvePositioned { model, position } => {
            let params = SolveParams {
                position: position.spec().unwrap_or_default(),
            };
            emit(to_pretty(&report(&store, &model, ReportRequest::Solve(params))?))?;
        }
        Command::Weights {
            model,
            points,
            theta,
            preferences,
        } => {
            let params = WeightsParams {
                theta,
                sample_count: None,
                supplied_points: read_points(&points)?,
                preferences,
            };
            emit(to_pretty(&report(&store, &model, ReportRequest::Weights(params))?))?;
        }
        Command::Algorithm1 {
            model,
            theta,
            points,
            samples,
            weights,
            preferences,
        } => {
            let options = Algorithm1Options {
                theta,
                sample_count: samples,
                supplied_points: read_points(&points)?,
                preferences,
                weights,
            };
            emit(to_pretty(&report(&store, &model, ReportRequest::Algorithm1(options))?))?;
        }
        Command::Algorithm2 {
            model,
            theta,
            points,
            samples,
            weights,
            preferences,
            reproduce_paper_rounding,
        } => {
            let params = Algorithm2Params {
                theta,
                weights,
                sample_count: samples,
                supplied_points: read_points(&points)?,
                preferences,
                reproduce_paper_rounding,
            };
            emit(to_pretty(&report(&store, &model, ReportRequest::Algorithm2(params))?))?;
        }
        Command::Frontier {
            portfolio,
            epsilons,
            theta,
            exact,
            purchase_cap,
            csv,
        } => {
            let params = FrontierParams {
                theta,
                epsilons,
                fee_mode: if exact { FeeMode::Exact } else { FeeMode::Proportional },
                purchase_cap,
            };
            let r = report(&store, &portfolio, ReportRequest::Frontier(params))?;
            if let (Some(path), Some(table)) = (csv, &r.csv) {
                std::fs::write(path, table)?;
            }
            emit(to_pretty(&r))?;
        }
        Command::Session(cmd) => {
            let state = match cmd {
                SessionCommand::Start {
                    model,
                    mu0,
                    theta_lambda,
                    risk_weight,
                    purchase_cap,
                    position,
                } => store.start_session(&StartRequest {
                    model: resolve_model(&store, &model)?,
                    target_floor: mu0,
                    theta_lambda,
                    positioned: position.spec().unwrap_or_default(),
                    risk_weight,
                    purchase_cap,
                })?,
                SessionCommand::Step {
                    id,
                    risk_weight,
                    theta_lambda,
                    position,
                } => store.step_session(
                    &id,
                    &StepRequest {
                        risk_weight,
                        positioned: position.spec(),
                        theta_lambda,
                    },
                )?,
                SessionCommand::Show { id } => store.load_session(&id)?,
                SessionCommand::Abandon { id } => store.abandon_session(&id)?,
            };
            emit(to_pretty(&state))?;
        }
        Command::Serve { listen } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(greyplan::http::serve(store, &listen))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            if let PlannerError::DegenerateAssessment { advisory, .. } = &e {
                eprintln!("advice: {advisory}");
            }
            ExitCode::from(2)
        }
    }
}
