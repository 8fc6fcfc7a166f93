use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use neurosyn_cli::commands::{cmd_check, cmd_rate, cmd_simulate, cmd_sweep};
use neurosyn_cli::{CliError, RunConfig, EXIT_INVALID};

/// Neural-synaptic network simulator and contraction certifier.
#[derive(Parser)]
#[command(name = "neurosyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the contraction certificate. Exit 0 if certified, 1 if not.
    Check { config: PathBuf },
    /// Integrate the configured run and print monitor reports.
    Simulate {
        config: PathBuf,
        /// Trajectory CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot script plotting the CSV.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Empirical contraction rates over random trajectory pairs.
    Rate {
        config: PathBuf,
        #[arg(long, default_value_t = 10)]
        pairs: usize,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Certificate over a parameter grid, as CSV.
    Sweep {
        config: PathBuf,
        /// One of c_n, c_s, c_o, h-scale, ubar-scale.
        #[arg(long)]
        param: String,
        /// Inclusive grid a:b:steps.
        #[arg(long)]
        range: String,
        /// Add one empirical rate per grid point.
        #[arg(long)]
        empirical: bool,
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Check { config } => cmd_check(&RunConfig::load(&config)?, out),
        Command::Simulate { config, out: csv, plot } => cmd_simulate(&RunConfig::load(&config)?, csv.as_deref(), plot.as_deref(), out),
        Command::Rate { config, pairs, jobs } => cmd_rate(&RunConfig::load(&config)?, pairs, jobs, out),
        Command::Sweep {
            config,
            param,
            range,
            empirical,
            jobs,
            out: dest,
        } => {
            let cfg = RunConfig::load(&config)?;
            match dest {
                Some(path) => {
                    let mut file = io::BufWriter::new(std::fs::File::create(&path)?);
                    let code = cmd_sweep(&cfg, &param, &range, empirical, jobs, &mut file)?;
                    file.flush()?;
                    Ok(code)
                }
                None => cmd_sweep(&cfg, &param, &range, empirical, jobs, out),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match dispatch(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
