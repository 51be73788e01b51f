//! Thin command-line wrapper around [`tsent::cli`].

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use tsent::cli::{self, Command, Flags, Format};
use tsent::entropy::LogBase;

#[derive(Parser)]
#[command(
    name = "tsent",
    about = "Stem and topological entropy of Markov tree shifts on Cayley trees",
    arg_required_else_help = true
)]
struct Cli {
    /// One of: analyze, stem, top, fulltree, oracle, certify
    command: Command,

    /// Path to a JSON system config (omit with --batch)
    config: Option<PathBuf>,

    /// Iteration budget override
    #[arg(long, value_name = "N")]
    iters: Option<usize>,

    /// Convergence threshold override
    #[arg(long, value_name = "E")]
    eps: Option<f64>,

    /// Output log base: e, 2 or 10
    #[arg(long, value_name = "B")]
    log_base: Option<LogBase>,

    /// Depth for the oracle comparison
    #[arg(long, value_name = "D")]
    depth: Option<usize>,

    /// Report format: text, csv or json
    #[arg(long, value_name = "F", default_value = "text")]
    format: Format,

    /// Run over every .json config in a directory
    #[arg(long, value_name = "DIR", conflicts_with = "config")]
    batch: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let flags = Flags {
        iters: args.iters,
        eps: args.eps,
        log_base: args.log_base,
        depth: args.depth,
        format: args.format,
    };

    let output = match (&args.batch, &args.config) {
        (Some(dir), _) => cli::run_batch(args.command, dir, &flags),
        (None, Some(path)) => cli::run(args.command, path, &flags),
        (None, None) => {
            eprintln!("error: provide a config path or --batch DIR");
            return ExitCode::from(cli::EXIT_INVALID as u8);
        }
    };

    for warning in &output.warnings {
        eprintln!("{warning}");
    }
    print!("{}", output.stdout);
    ExitCode::from(output.exit_code as u8)
}
