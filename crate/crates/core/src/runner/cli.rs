use super::config::parse_target_kind;
use super::{epsilon_sweep, gradient_check, integrate, write_checkpoint, write_diagnostics_csv, RunConfig, Scheme};
use crate::curve::DiscreteCurve;
use crate::error::{FlowError, Result};
use crate::flow::HamiltonianParams;
use crate::identities::run_identity_suite;
use crate::manifold::TargetManifold;
use crate::spectral::GridSpec;
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IDENTITY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "curveflow", version, about = "Fourth-order dispersive curve flows on Kähler targets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Run configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long)]
    seed: Option<u64>,
    /// Target override: sphere2, cp<n> or gr<n>,<k>.
    #[arg(long)]
    target: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate the regularized flow and write diagnostics.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        /// imex-bdf2 or rk4.
        #[arg(long)]
        scheme: Option<String>,
        /// Diagnostics CSV path; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// Run the curvature identity suite.
    CheckIdentities {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Print key=value records instead of a table.
        #[arg(long)]
        records: bool,
    },
    /// Finite-difference check of the energy gradients.
    GradCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// Integrate for several ε and compare the final states.
    SweepEpsilon {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, descending.
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.4, 0.2, 0.1, 0.05])]
        epsilons: Vec<f64>,
    },
}

/// Parses `args` (program name first) and runs the command. Returns the exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &FlowError) -> i32 {
    match e {
        FlowError::NumericalAbort { .. } | FlowError::SweepRun { .. } => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    if let Some(t) = &common.target {
        cfg.target.kind = parse_target_kind(t)?;
        cfg.target.manifold().map_err(|e| FlowError::Config(e.to_string()))?;
    }
    if let Some(seed) = common.seed {
        cfg.set_seed(seed);
    }
    Ok(cfg)
}

fn dispatch(cmd: Command) -> Result<i32> {
    let stdout = std::io::stdout();
    match cmd {
        Command::Simulate { common, dt, t_end, epsilon, scheme, csv, checkpoint } => {
            let mut cfg = load(&common)?;
            if let Some(e) = epsilon {
                cfg.flow = cfg.flow.with_epsilon(e).map_err(|e| FlowError::Config(e.to_string()))?;
            }
            if let Some(s) = scheme {
                cfg.integrator.scheme = s.parse::<Scheme>()?;
            }
            if let Some(dt) = dt {
                cfg.integrator.dt = dt;
            }
            if let Some(t) = t_end {
                cfg.integrator.t_end = t;
            }
            cfg.output.csv = csv.or(cfg.output.csv);
            cfg.output.checkpoint = checkpoint.or(cfg.output.checkpoint);
            let curve0 = cfg.initial_curve()?;
            let traj = integrate(&curve0, &cfg.flow, &cfg.integrator)?;
            match &cfg.output.csv {
                Some(path) => write_diagnostics_csv(BufWriter::new(File::create(path)?), &traj.records)?,
                None => write_diagnostics_csv(stdout.lock(), &traj.records)?,
            }
            if let Some(path) = &cfg.output.checkpoint {
                write_checkpoint(BufWriter::new(File::create(path)?), traj.final_curve())?;
            }
            let last = traj.records.last().expect("initial record");
            log::info!("simulated {} steps, final t = {:e}, N_k = {:e}", last.step, last.t, last.norms.nk);
            Ok(EXIT_OK)
        }
        Command::CheckIdentities { common, trials, records } => {
            let cfg = load(&common)?;
            let target = cfg.target.manifold()?;
            let seed = common.seed.unwrap_or(0);
            let report = run_identity_suite(&target, trials, seed)?;
            let mut out = stdout.lock();
            if records {
                write!(out, "{}", report.to_records())?;
            } else {
                writeln!(out, "target {:?}, {trials} trials, seed {seed}", target.kind())?;
                write!(out, "{}", report.to_table())?;
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_IDENTITY })
        }
        Command::GradCheck { common, points } => {
            let cfg = load(&common)?;
            let target: TargetManifold = cfg.target.manifold()?;
            let seed = common.seed.unwrap_or(0);
            let grid = GridSpec::new(points, cfg.dealias).map_err(|e| FlowError::Config(e.to_string()))?;
            let curve = DiscreteCurve::random_smooth(target, grid, seed);
            let hp = HamiltonianParams::from_flow(&cfg.flow);
            let report = gradient_check(&curve, &hp, &[1e-3, 1e-4], seed)?;
            let mut out = stdout.lock();
            write!(out, "{}", report.to_table())?;
            let orders = report.orders();
            if !orders.is_empty() {
                let mean = orders.iter().sum::<f64>() / orders.len() as f64;
                writeln!(out, "mean observed order {mean:.3} over {} directions", orders.len())?;
            }
            Ok(if report.passed() { EXIT_OK } else { EXIT_IDENTITY })
        }
        Command::SweepEpsilon { common, epsilons } => {
            let cfg = load(&common)?;
            let curve0 = cfg.initial_curve()?;
            let report = epsilon_sweep(&curve0, &cfg.flow, &epsilons, &cfg.integrator)?;
            write!(stdout.lock(), "{}", report.to_table())?;
            Ok(EXIT_OK)
        }
    }
}
