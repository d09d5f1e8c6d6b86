//! Command-line front end. Machine-readable output (configurations, CSV,
//! single-line JSON) goes to stdout or `--out`; diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical/solver failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use diamflow_core::constructions::{push_construction, regular_ngon, ConstructionSpec};
use diamflow_core::error::{Error, Result};
use diamflow_core::experiments::{
    extrapolate, pommerenke_check_record, read_sweep_csv, rho_audit, run_sweep, write_sweep_csv,
    CMode, SweepOptions,
};
use diamflow_core::geometry::{
    diameter, format_configuration, log_discriminant, read_configuration, write_configuration,
    Configuration,
};
use diamflow_core::profile::Profile;
use diamflow_core::quadrature::{integral_i, limit_constant};
use diamflow_core::solvers::{c_max, DEFAULT_C_TOL};

#[derive(Parser, Debug)]
#[command(
    name = "diamflow",
    version,
    about = "Diameter-2 point configurations and their distance products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regular n-gon of diameter 2.
    Ngon {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Push construction for a profile at a given or maximal strength.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        profile: String,
        /// `max` or a number.
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = DEFAULT_C_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// log Δ and log(Δ/nⁿ) of a configuration file.
    Delta {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Diameter of a configuration file.
    Diameter {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Largest push strength keeping the diameter at 2.
    Cmax {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = DEFAULT_C_TOL)]
        tol: f64,
    },
    /// The critical double integral and the resulting constant.
    Integral {
        #[arg(long)]
        profile: String,
        #[arg(long)]
        grid: usize,
    },
    /// Per-n sweep written as CSV.
    Sweep {
        /// Comma-separated, ascending, even.
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "max")]
        c: String,
        #[arg(long, default_value_t = DEFAULT_C_TOL)]
        tol: f64,
        /// Write 0 in runtime_ms so repeated runs are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Affine-in-1/n fit of log_ratio from a sweep CSV.
    Extrapolate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Power sums of ρ, max |ρ| and the Taylor audit for one configuration.
    RhoAudit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        profile: String,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = DEFAULT_C_TOL)]
        tol: f64,
    },
}

fn emit_config(config: &Configuration, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            write_configuration(config, path)?;
            eprintln!("wrote {} points to {}", config.len(), path.display());
        }
        None => io::stdout().write_all(format_configuration(config).as_bytes())?,
    }
    Ok(())
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "{value}")?;
    Ok(())
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ngon { n, out } => emit_config(&regular_ngon(n)?, out.as_ref()),
        Command::Construct {
            n,
            profile,
            c,
            tol,
            out,
        } => {
            let profile = Profile::parse(&profile)?;
            let c = match CMode::parse(&c, tol)? {
                CMode::Max { tol } => {
                    let r = c_max(n, &profile, tol)?;
                    eprintln!(
                        "c_max({n}) = {} (binding pair {:?})",
                        r.c_max, r.binding_pair
                    );
                    r.c_max
                }
                CMode::Fixed(c) => c,
            };
            let config = push_construction(&ConstructionSpec::new(n, c, profile)?)?;
            emit_config(&config, out.as_ref())
        }
        Command::Delta { input } => {
            let config = read_configuration(&input)?;
            let n = config.len() as f64;
            let ld = log_discriminant(&config)?;
            print_json(&json!({
                "n": config.len(),
                "logDelta": ld,
                "logRatio": ld - n * n.ln(),
            }))
        }
        Command::Diameter { input } => {
            let config = read_configuration(&input)?;
            print_json(&json!({ "n": config.len(), "diameter": diameter(&config) }))
        }
        Command::Cmax { n, profile, tol } => {
            let r = c_max(n, &Profile::parse(&profile)?, tol)?;
            print_json(&serde_json::to_value(&r).expect("serializable"))
        }
        Command::Integral { profile, grid } => {
            let q = integral_i(&Profile::parse(&profile)?, grid)?;
            print_json(&json!({
                "re": q.re(),
                "im": q.im(),
                "refinementGap": q.refinement_gap,
                "grid": q.grid_size,
                "C": limit_constant(q.re()),
            }))
        }
        Command::Sweep {
            n_list,
            profile,
            out,
            c,
            tol,
            no_timing,
        } => {
            let profile = Profile::parse(&profile)?;
            let mode = CMode::parse(&c, tol)?;
            let options = SweepOptions { timing: !no_timing };
            let mut file = BufWriter::new(File::create(&out)?);
            match run_sweep(&n_list, &profile, mode, options) {
                Ok(records) => {
                    for r in &records {
                        if !pommerenke_check_record(r) {
                            eprintln!("warning: n = {} violates the Pommerenke bound", r.n);
                        }
                        if let Some(a) = r.audit.filter(|a| !a.passed) {
                            eprintln!(
                                "warning: n = {} Taylor audit deviation {:e} > bound {:e}",
                                r.n, a.deviation, a.bound
                            );
                        }
                    }
                    write_sweep_csv(&records, &mut file)?;
                    file.flush()?;
                    eprintln!("wrote {} records to {}", records.len(), out.display());
                    Ok(())
                }
                Err(Error::SweepAborted { n, partial, source }) => {
                    write_sweep_csv(&partial, &mut file)?;
                    writeln!(file, "# partial: sweep aborted at n={n}: {source}")?;
                    file.flush()?;
                    Err(Error::SweepAborted { n, partial, source })
                }
                Err(e) => Err(e),
            }
        }
        Command::Extrapolate { input } => {
            let records = read_sweep_csv(File::open(&input)?)?;
            let e = extrapolate(&records)?;
            print_json(&serde_json::to_value(e).expect("serializable"))
        }
        Command::RhoAudit { n, profile, c, tol } => {
            let profile = Profile::parse(&profile)?;
            let a = rho_audit(n, &profile, CMode::parse(&c, tol)?)?;
            print_json(&serde_json::to_value(&a).expect("serializable"))
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
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
