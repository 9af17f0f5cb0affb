//! `qdoeblin`: Doeblin coefficients of quantum channels from the command line.

mod channel_args;
mod check;
mod columns;
mod commands;
mod error;
mod figures;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdoeblin::doeblin::Doeblin;
use qdoeblin::sdp::SolverSettings;

use channel_args::ChannelArgs;
use columns::parse_columns;
use commands::SweepSpec;
use error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "qdoeblin", version, about = "Quantum Doeblin coefficients via semidefinite programming")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Relative duality gap target of the solver.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Include alpha_TH in the contraction upper bound.
    #[arg(long, global = true)]
    combine_th: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of one channel, as a CSV row on standard output.
    Coeff {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Comma-separated kinds, e.g. `alpha,alphaT,rev`.
        #[arg(long, value_delimiter = ',', required = true)]
        kind: Vec<String>,
        /// Also write each program in SDPA sparse format to this directory.
        #[arg(long)]
        sdpa_dir: Option<PathBuf>,
    },
    /// Coefficients over a grid of one channel parameter.
    Sweep {
        #[command(flatten)]
        channel: ChannelArgs,
        /// Swept parameter name.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        stop: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        kind: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Data (CSV) and plots (SVG) for fig1..fig8.
    Figures {
        /// fig1..fig8 or `all`.
        #[arg(long, default_value = "all")]
        which: String,
        #[arg(long, default_value = "figures")]
        outdir: PathBuf,
        /// Skip the SVG plots.
        #[arg(long)]
        no_svg: bool,
    },
    /// Randomized invariant checks.
    Check {
        /// linalg, channel, sdp, doeblin, classical or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {}", cli.tol)));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    pool.build_global()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;

    let mut doeblin = Doeblin::new(SolverSettings {
        gap_tol: cli.tol,
        ..SolverSettings::default()
    });
    doeblin.combine_th = cli.combine_th;

    match cli.command {
        Command::Coeff { channel, kind, sdpa_dir } => {
            let columns = parse_columns(&kind)?;
            commands::coeff(&doeblin, &channel, &columns, sdpa_dir.as_deref())
        }
        Command::Sweep {
            channel,
            param,
            start,
            stop,
            step,
            kind,
            out,
            svg,
        } => {
            let spec = SweepSpec {
                channel,
                param,
                start,
                stop,
                step,
                columns: parse_columns(&kind)?,
            };
            commands::sweep(&doeblin, &spec, &out, svg.as_ref())
        }
        Command::Figures { which, outdir, no_svg } => figures::run(&doeblin, &which, &outdir, !no_svg),
        Command::Check { suite } => {
            eprintln!("seed {}", cli.seed);
            check::run(&doeblin, &suite, cli.seed)
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
