use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use latticerect_cli::input::{parse_spec, validate};
use latticerect_cli::{run, Command, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Analyze,
    Graph,
    Verify,
    Iwasawa,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Analyze => Command::Analyze,
            Cmd::Graph => Command::Graph,
            Cmd::Verify => Command::Verify,
            Cmd::Iwasawa => Command::Iwasawa,
        }
    }
}

/// Stable lattices of two-dimensional representations over localized
/// polynomial rings.
#[derive(Parser, Debug)]
#[command(name = "latticerect", version)]
struct Args {
    command: Cmd,
    /// Input JSON document.
    #[arg(long)]
    input: PathBuf,
    /// Write the lattice graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Override the closure word-length bound.
    #[arg(long)]
    word_bound: Option<usize>,
    /// Override the gcd stabilization window.
    #[arg(long)]
    window: Option<usize>,
    /// Seed for the randomized checks of `verify`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let problem = parse_spec(&text).and_then(|mut spec| {
        if let Some(b) = args.word_bound {
            spec.closure.word_bound = b;
        }
        if let Some(w) = args.window {
            spec.closure.window = w;
        }
        validate(spec)
    });
    let problem = match problem {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let outcome = match run(args.command.into(), &problem, RunOptions { seed: args.seed }) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", outcome.report.to_text());
    let mut artifacts = Vec::new();
    if let Some(p) = &args.json {
        artifacts.push(write(p, &outcome.report.to_json()));
    }
    if let Some(p) = &args.dot {
        match &outcome.dot {
            Some(d) => artifacts.push(write(p, d)),
            None => eprintln!("warning: no graph was built, {} not written", p.display()),
        }
    }
    for a in artifacts {
        if let Err(e) = a {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(outcome.exit_code() as u8)
}
