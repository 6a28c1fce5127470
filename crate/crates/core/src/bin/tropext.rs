use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use tropext::cli::{run, Command, EXIT_INPUT};
use tropext::selftest::run_selftest;

/// Universal extensions of tropical structures on curves.
#[derive(Debug, Parser)]
#[command(name = "tropext", version)]
struct Args {
    /// validate, universal, classify, pullback, pushout, facecheck or selftest
    #[arg(long)]
    command: Command,
    /// Problem file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Where to write the solution; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Comma-separated edge ids to smooth, overriding the file's params.
    #[arg(long, value_delimiter = ',')]
    smooth_edges: Option<Vec<String>>,
    /// Seed for the randomized suites of `selftest`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn emit(args: &Args, text: &str) -> std::io::Result<()> {
    match &args.output {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (code, text) = if args.command == Command::Selftest {
        let summary = run_selftest(args.seed);
        (if summary.passed() { 0 } else { 1 }, summary.to_string())
    } else {
        let Some(path) = &args.input else {
            eprintln!("--input is required for {}", args.command);
            return ExitCode::from(EXIT_INPUT as u8);
        };
        match fs::read(path) {
            Ok(bytes) => {
                let out = run(args.command, &bytes, args.smooth_edges.as_deref());
                (out.code, out.output)
            }
            Err(e) => {
                eprintln!("cannot read {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
    };
    if let Err(e) = emit(&args, &text) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(code as u8)
}
