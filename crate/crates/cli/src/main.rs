//! `iclandscape`: walk generation, IC analysis, `(qubits, layers)` scans,
//! pre-factor fits and validation suites.
//!
//! Data goes to files and standard output; progress goes to standard error.
//! Exit codes: 0 success, 1 validation or cell failure, 2 configuration or
//! argument error, 3 I/O or input-format error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use iclandscape::experiment::{
    cmd_analyze, cmd_fit, cmd_scan, cmd_validate, cmd_walk, scan_cells, ExperimentConfig,
};
use iclandscape::quantum::AnsatzLayout;
use iclandscape::Error;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "iclandscape", version, about = "Information content of variational cost landscapes")]
struct Cli {
    /// JSON experiment config; defaults apply to every missing field.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// SIC threshold η in (0, 1/6].
    #[arg(long, global = true, value_name = "F")]
    eta: Option<f64>,
    /// Walk step length d in radians.
    #[arg(long = "step-size", global = true, value_name = "F")]
    step_size: Option<f64>,
    /// Repetitions per walk and per scan cell.
    #[arg(long, global = true, value_name = "K")]
    reps: Option<usize>,
    /// Scan worker threads.
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate walk datasets (one CSV + manifest per repetition).
    Walk {
        /// Also dump every visited θ.
        #[arg(long)]
        dump_theta: bool,
    },
    /// IC features and gradient bounds of a walk CSV or dataset directory.
    Analyze {
        dataset: PathBuf,
    },
    /// Walk and analyze every (observable, qubits, layers, rep) cell.
    Scan,
    /// Fit scaling pre-factors to a scan CSV (default `<out>/scan.csv`).
    Fit {
        scan: Option<PathBuf>,
        /// Weight points by 1/spread².
        #[arg(long)]
        weighted: bool,
        /// Layout used to derive m when the CSV has no `m` column.
        #[arg(long, value_name = "brick|blocks")]
        layout: Option<AnsatzLayout>,
    },
    /// Run the distribution, special-function, containment and
    /// Gaussian-limit suites.
    Validate,
    /// Print the effective configuration.
    PrintConfig,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::InvalidArgument(_) => 2,
        Error::Io { .. } | Error::Parse { .. } => 3,
        _ => 1,
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.walk.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output = o.clone();
    }
    if let Some(eta) = cli.eta {
        cfg.ic.eta = eta;
    }
    if let Some(d) = cli.step_size {
        cfg.walk.step_size = d;
    }
    if let Some(r) = cli.reps {
        cfg.walk.repetitions = r;
        cfg.scan.repetitions = r;
    }
    if let Some(j) = cli.jobs {
        cfg.scan.jobs = Some(j);
    }
    if let Command::Walk { dump_theta: true } = cli.command {
        cfg.walk.dump_theta = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes to standard output; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn print_json<T: Serialize>(value: &T) {
    emit(&serde_json::to_string_pretty(value).expect("report serializes"));
}

#[derive(Serialize)]
struct ScanSummary<'a> {
    cells: usize,
    failures: &'a [iclandscape::experiment::CellFailure],
    files: &'a [PathBuf],
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::PrintConfig => {
            emit(&cfg.to_json_pretty());
            Ok(0)
        }
        Command::Walk { .. } => {
            eprintln!(
                "walk: {} repetition(s) into {}",
                cfg.walk.repetitions,
                cfg.output.display()
            );
            let out = cmd_walk(&cfg)?;
            print_json(&out);
            Ok(0)
        }
        Command::Analyze { dataset } => {
            let report = cmd_analyze(dataset, &cfg.ic, Some(&cfg.output))?;
            for r in report.repetitions.iter().filter(|r| !r.mic_applicable) {
                eprintln!(
                    "analyze: rep {} of {}: H_M = {:.4} <= 2h(1/2), MIC bound not applicable; SIC bound only",
                    r.rep,
                    r.source.display(),
                    r.features.h_max
                );
            }
            print_json(&report);
            Ok(0)
        }
        Command::Scan => {
            let cells = scan_cells(&cfg).len();
            eprintln!("scan: {cells} cell(s) into {}", cfg.output.display());
            let start = Instant::now();
            let out = cmd_scan(&cfg)?;
            eprintln!(
                "scan: finished in {:.1}s, {} failed cell(s)",
                start.elapsed().as_secs_f64(),
                out.failures.len()
            );
            for f in &out.failures {
                eprintln!(
                    "scan: {} n={} L={} rep={} failed: {}",
                    f.cell.observable, f.cell.qubits, f.cell.layers, f.cell.rep, f.error
                );
            }
            print_json(&ScanSummary {
                cells,
                failures: &out.failures,
                files: &out.files,
            });
            Ok(if out.failures.is_empty() { 0 } else { 1 })
        }
        Command::Fit {
            scan,
            weighted,
            layout,
        } => {
            let default_path = cfg.output.join("scan.csv");
            let path: &Path = scan.as_deref().unwrap_or(&default_path);
            let out = cmd_fit(
                path,
                layout.unwrap_or(cfg.scan.layout),
                *weighted || cfg.fit.weighted,
                &cfg.output,
            )?;
            for s in &out.report.skipped {
                eprintln!(
                    "fit: skipped {} {}={} ({}): {}",
                    s.table.name(),
                    match s.table.axis() {
                        iclandscape::fit::Axis::Qubits => "layers",
                        iclandscape::fit::Axis::Layers => "qubits",
                    },
                    s.fixed,
                    s.statistic.label(),
                    s.reason
                );
            }
            print_json(&out.report.fits);
            Ok(0)
        }
        Command::Validate => {
            let start = Instant::now();
            let report = cmd_validate();
            for c in &report.checks {
                eprintln!(
                    "validate: [{}] {} / {}: {} (threshold {})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.suite,
                    c.check,
                    c.value,
                    c.threshold
                );
            }
            eprintln!("validate: done in {:.1}s", start.elapsed().as_secs_f64());
            print_json(&report);
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
