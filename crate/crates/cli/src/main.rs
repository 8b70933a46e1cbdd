//! `vevlab`: verification suites, Compton cross-section sweeps, equivalent
//! potential tables, and amplitude evaluation from a JSON config.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vevlab::commands::{
    cmd_amplitude, cmd_compton, cmd_potential, cmd_verify, ComptonArgs, PotentialArgs, VerifyArgs,
};
use vevlab::config;
use vevlab::format::OutputFormat;
use vevlab::CliError;

#[derive(Parser)]
#[command(name = "vevlab", version, about = "Field-theory verification and scattering tables")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format for tables.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run seeded property-verification suites.
    Verify {
        /// kinematics | dirac | fields | wick | scattering | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Residual tolerance for the identity rows.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Negative control: corrupt the two-point model block signs.
        #[arg(long)]
        corrupt: bool,
    },
    /// Compton differential cross-section sweep over a theta grid.
    Compton {
        /// Incident photon energy in the electron rest frame.
        #[arg(long)]
        photon_energy: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = 0.3)]
        charge: f64,
        #[arg(long, default_value_t = 0.0)]
        theta_min: f64,
        #[arg(long, default_value_t = std::f64::consts::PI)]
        theta_max: f64,
        #[arg(long, default_value_t = 16)]
        theta_steps: usize,
        /// feynman | constructed | both
        #[arg(long, default_value = "both")]
        variant: String,
    },
    /// Equivalent-potential magnitude/phase table over an r grid.
    Potential {
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        c4: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        /// Incident momentum magnitude.
        #[arg(long, default_value_t = 1e-3)]
        p1: f64,
        #[arg(long)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        #[arg(long, default_value_t = 32)]
        r_steps: usize,
        /// Use quadrature for the radial transform instead of the closed form.
        #[arg(long)]
        quadrature: bool,
    },
    /// Evaluate the constructed amplitude from a JSON config (JSON output).
    Amplitude {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, CliError> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(CliError::Usage(format!("unknown format '{other}'"))),
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let format = parse_format(&cli.format)?;
    match cli.command {
        Cmd::Verify { suite, trials, seed, tol, corrupt } => {
            let (report, failures) = cmd_verify(&VerifyArgs {
                suite,
                trials,
                seed,
                tol,
                corrupt,
                format,
            })?;
            write_output(&cli.out, &report)?;
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(failures))
            }
        }
        Cmd::Compton {
            photon_energy,
            mass,
            charge,
            theta_min,
            theta_max,
            theta_steps,
            variant,
        } => {
            let table = cmd_compton(&ComptonArgs {
                photon_energy,
                mass,
                charge,
                theta_min,
                theta_max,
                theta_steps,
                variant,
                format,
            })?;
            write_output(&cli.out, &table)
        }
        Cmd::Potential {
            delta,
            epsilon,
            alpha,
            c4,
            mass,
            p1,
            r_min,
            r_max,
            r_steps,
            quadrature,
        } => {
            let table = cmd_potential(&PotentialArgs {
                delta,
                epsilon,
                alpha,
                c4,
                mass,
                p1,
                r_min,
                r_max,
                r_steps,
                quadrature,
                format,
            })?;
            write_output(&cli.out, &table)
        }
        Cmd::Amplitude { config: path } => {
            let cfg = config::load(&path)?;
            let record = cmd_amplitude(&cfg)?;
            write_output(&cli.out, &record)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
