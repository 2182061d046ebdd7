use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use moneygraph_cli::commands::{self, PegFlags, RunFlags};
use moneygraph_cli::service;

#[derive(Parser)]
#[command(name = "moneygraph", version, about = "Monetary systems as balance-sheet graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file; exits 1 on any parse, assertion or operation failure.
    Run {
        path: PathBuf,
        /// Write the JSON-lines trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the step,base,broad,net series here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the final graph as DOT here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Monte Carlo reserve depletion under a fixed conversion rate.
    Pegsim {
        #[arg(long)]
        reserves: u64,
        /// Reserve units per domestic unit, `p/q`.
        #[arg(long, default_value = "1")]
        rate: String,
        #[arg(long, default_value = "GOLD")]
        reserve_asset: String,
        /// Demand distribution, e.g. "+1:1/2,-1:1/2".
        #[arg(long, allow_hyphen_values = true)]
        deltas: String,
        #[arg(long)]
        horizon: u32,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the exact depletion probability.
        #[arg(long)]
        oracle: bool,
        /// Write per-trial depletion steps as CSV.
        #[arg(long)]
        steps_csv: Option<PathBuf>,
    },
    /// Serve the session API.
    Serve {
        #[arg(long, env = "MONEYGRAPH_PORT", default_value_t = 8080)]
        port: u16,
    },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    match cli.command {
        Command::Run {
            path,
            trace,
            csv,
            dot,
        } => code(commands::run(
            &path,
            &RunFlags { trace, csv, dot },
            &mut out,
            &mut err,
        )),
        Command::Pegsim {
            reserves,
            rate,
            reserve_asset,
            deltas,
            horizon,
            trials,
            seed,
            oracle,
            steps_csv,
        } => {
            let flags = PegFlags {
                reserves,
                rate,
                reserve_asset,
                deltas,
                horizon,
                trials,
                seed,
                oracle,
                steps_csv,
            };
            code(commands::pegsim(&flags, &mut out, &mut err))
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
            match rt.block_on(service::serve(port)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
