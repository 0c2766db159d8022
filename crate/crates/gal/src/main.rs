use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gal::commands::{self, CompareOptions, RunRecord};
use gal::format::{write_trajectory_csv, Experiment, InstanceFile, Method, SweepFile};
use gal::sweep;
use gal::{LabError, Result};
use serde::Serialize;

/// Closed-form vs brute-force Grover search from arbitrary initial amplitudes.
///
/// Logging goes to stderr and is controlled by GAL_LOG (e.g. GAL_LOG=info).
#[derive(Parser)]
#[command(name = "gal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form trajectory and spectral summary.
    Predict {
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force statevector trajectory.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// Both engines side by side; exits 3 if they disagree beyond tolerance.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Maximum allowed |ΔP| and amplitude deviation.
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, hide = true, allow_hyphen_values = true)]
        perturb_omega: Option<f64>,
    },
    /// Noise-robustness sweep over seeded noisy-uniform starts.
    Sweep {
        /// Sweep description (JSON).
        sweep: PathBuf,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long, env = "GAL_JOBS")]
        jobs: Option<usize>,
        /// Overrides `base_seed`.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Measurement schedule as JSON; exits 4 for hopeless instances.
    Plan {
        instance: PathBuf,
        /// Only the moment-independent two-time schedule.
        #[arg(long)]
        two_time: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Instance description (JSON).
    instance: PathBuf,
    /// Last iteration to report.
    #[arg(long)]
    t_max: Option<u64>,
    /// Overrides the initial-state seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn load(path: &Path, seed: Option<u64>) -> Result<Experiment> {
    let mut exp = InstanceFile::load(path)?.resolve()?;
    if let Some(seed) = seed {
        exp.init.seed = seed;
    }
    log::info!(
        "loaded {}: N={} r={} seed={}",
        path.display(),
        exp.instance.n(),
        exp.instance.r(),
        exp.init.seed
    );
    Ok(exp)
}

fn open(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|source| {
            LabError::Io {
                path: path.to_owned(),
                source,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut w = open(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// `runs/a.csv` → `runs/a.summary.json`.
fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}.summary.json"))
}

fn emit_run(record: &RunRecord, output: &Output) -> Result<()> {
    let out = output.out.as_deref();
    match output.format {
        Format::Json => write_json(record, out),
        Format::Csv => {
            let mut w = open(out)?;
            write_trajectory_csv(&mut w, &record.rows)?;
            w.flush()?;
            if let Some(out) = out {
                write_json(&record.summary, Some(&summary_path(out)))?;
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Predict { common } => {
            let exp = load(&common.instance, common.seed)?;
            emit_run(&commands::predict(&exp, common.t_max)?, &common.output)
        }
        Command::Simulate { common, method } => {
            let exp = load(&common.instance, common.seed)?;
            emit_run(
                &commands::simulate(&exp, common.t_max, method)?,
                &common.output,
            )
        }
        Command::Compare {
            common,
            method,
            tolerance,
            perturb_omega,
        } => {
            let exp = load(&common.instance, common.seed)?;
            let opts = CompareOptions {
                tolerance,
                perturb_omega,
                method,
            };
            let record = commands::compare(&exp, common.t_max, opts)?;
            emit_run(&record, &common.output)?;
            commands::check_divergence(&record)
        }
        Command::Sweep {
            sweep: path,
            jobs,
            seed,
            output,
        } => {
            let mut file = SweepFile::load(&path)?;
            if let Some(seed) = seed {
                file.base_seed = seed;
            }
            let report = sweep::sweep(&file, jobs)?;
            match output.format {
                Format::Json => write_json(&report, output.out.as_deref()),
                Format::Csv => {
                    let mut w = open(output.out.as_deref())?;
                    report.write_csv(&mut w)?;
                    w.flush()?;
                    Ok(())
                }
            }
        }
        Command::Plan {
            instance,
            two_time,
            seed,
            out,
        } => {
            let exp = load(&instance, seed)?;
            let report = commands::plan(&exp, two_time)?;
            write_json(&report, out.as_deref())?;
            commands::check_plan(&report)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GAL_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_status() as u8)
        }
    }
}
