use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use segal_topos::{io::Workspace, Error, DEFAULT_BOUND};

mod commands;
mod report;

use report::Report;

/// Checks Segal objects, completeness and univalence in finite presheaf toposes.
#[derive(Parser, Debug)]
#[command(name = "segtop", version)]
struct Cli {
    /// Workspace file to load.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    /// Cap on the size of any intermediate set.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for enumeration sweeps; the report does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
    /// Include wall-clock timings, which makes the report nondeterministic.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load the workspace and run every validator.
    Validate,
    /// Check the Segal condition for a simplicial object, category or category object.
    CheckSegal {
        name: String,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        expect: bool,
    },
    /// Check completeness of a Segal object.
    CheckComplete {
        name: String,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        expect: bool,
    },
    /// Build the nerve of a map and print its data.
    Nerve { map: String },
    /// Decide univalence of a map.
    CheckUnivalent {
        map: String,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        expect: bool,
    },
    /// List univalent maps between small presheaves, up to isomorphism.
    EnumerateUnivalent {
        /// Largest set size at any index object.
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(long)]
        expect_count: Option<usize>,
    },
    /// Count pullback squares between enumerated univalent maps; each count must be at most 1.
    Poset {
        #[arg(long, default_value_t = 2)]
        max_size: usize,
    },
    /// For a mono, compare univalence with mono-ness of its classifying map.
    Classify { map: String },
    /// Evaluate every check declared in the workspace.
    Run,
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    let path = cli
        .workspace
        .as_ref()
        .ok_or_else(|| Error::Invalid("--workspace is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let ws = Workspace::from_str(&text, cli.bound)?;
    match &cli.command {
        Command::Validate => commands::validate(&ws),
        Command::CheckSegal { name, expect } => commands::check_segal(&ws, name, *expect),
        Command::CheckComplete { name, expect } => commands::check_complete(&ws, name, *expect),
        Command::Nerve { map } => commands::nerve(&ws, map),
        Command::CheckUnivalent { map, expect } => commands::check_univalent(&ws, map, *expect),
        Command::EnumerateUnivalent { max_size, expect_count } => {
            commands::enumerate_univalent(&ws, *max_size, *expect_count)
        }
        Command::Poset { max_size } => commands::poset(&ws, *max_size),
        Command::Classify { map } => commands::classify(&ws, map),
        Command::Run => commands::run(&ws),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.parallel.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let outcome = pool.install(|| execute(&cli));
    match outcome {
        Ok(mut r) => {
            if cli.timings {
                r.set_elapsed(start.elapsed());
            }
            print!("{}", if cli.json { r.to_json_string() } else { r.to_text() });
            if r.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceBound { .. } => 3,
                _ => 2,
            })
        }
    }
}
