use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mcs_adi::config::{load_config, RunConfig};
use mcs_adi::experiments::{
    column_notes, run_bs_demo, run_convergence, run_estimate, run_fourier_map, run_solve, write_bs_csv,
    write_convergence_csv, write_estimate_csv, write_fourier_csv,
};
use mcs_adi::Error;

#[derive(Parser)]
#[command(name = "mcs", version, about = "MCS ADI experiments for the 2D convection-diffusion model")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(clap::Args)]
struct Io {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Mode {
    /// Integrate the model problem on the first mesh of the ladder.
    Solve(Io),
    /// Error and predicted error for every mesh of the ladder.
    Convergence(Io),
    /// Modulus of the numerical Fourier transform on the first mesh.
    Fourier(Io),
    /// Predicted error components at every node of the first mesh.
    Estimate(Io),
    /// Cash-or-nothing value and cross gamma.
    Bsdemo(Io),
}

enum Failure {
    Config(String),
    Solver(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidParameter(_) => Failure::Config(e.to_string()),
            other => Failure::Solver(other.to_string()),
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Solver(e.to_string())
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_failure)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_notes(out: &Option<PathBuf>, mode: &str) -> Result<(), Failure> {
    if let Some(p) = out {
        let mut name = p.as_os_str().to_owned();
        name.push(".txt");
        std::fs::write(Path::new(&name), column_notes(mode)).map_err(io_failure)?;
    }
    Ok(())
}

fn run(mode: &str, cfg: &RunConfig, io: &Io) -> Result<(), Failure> {
    let w = sink(&io.out)?;
    let inv_h = cfg.primary_inv_h();
    match mode {
        "solve" => {
            let (u, report) = run_solve(cfg, inv_h)?;
            eprint!("{report}");
            u.write_csv(w)?;
        }
        "convergence" => {
            let rows = run_convergence(cfg);
            for r in &rows {
                if let Some(msg) = &r.failure {
                    eprintln!("1/h = {}: {msg}", r.inv_h);
                }
            }
            write_convergence_csv(&rows, w)?;
            if rows.iter().any(|r| r.failure.is_some()) {
                write_notes(&io.out, mode)?;
                return Err(Failure::Solver("one or more sweep rows failed".into()));
            }
        }
        "fourier" => write_fourier_csv(&run_fourier_map(cfg, inv_h)?, w)?,
        "estimate" => write_estimate_csv(&run_estimate(cfg, inv_h)?, w)?,
        "bsdemo" => {
            let demo = run_bs_demo(&cfg.bs, cfg.scheme.theta, cfg.scheme.n0)?;
            eprintln!("cross-gamma diagonal oscillation: {:.6e}", demo.oscillation);
            write_bs_csv(&demo, w)?;
        }
        _ => unreachable!("clap restricts the mode"),
    }
    write_notes(&io.out, mode)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, io) = match &cli.mode {
        Mode::Solve(io) => ("solve", io),
        Mode::Convergence(io) => ("convergence", io),
        Mode::Fourier(io) => ("fourier", io),
        Mode::Estimate(io) => ("estimate", io),
        Mode::Bsdemo(io) => ("bsdemo", io),
    };
    let cfg = match load_config(&io.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    match run(mode, &cfg, io) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
