//! Command-line front end for structural matrix algebra computations.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use smflag::{fixtures, parse_preorder, FieldError, GroupError, GroupSpec, LatticeError, ParseError, PrimeField};

use commands::{Job, Status};
use report::Format;

#[derive(Debug, Parser)]
#[command(name = "smflag", version, about = "Flags, automorphisms and good gradings of structural matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Args)]
struct Options {
    /// Preorder file (text `n <int>` + `i j` lines, or JSON).
    #[arg(long, global = true, conflicts_with_all = ["fixture", "inline"])]
    preorder: Option<PathBuf>,
    /// Built-in preorder: UT2, FULL2, CLS3, VEE, EX56, TWOPATHS, EX56+APEX.
    #[arg(long, global = true, conflicts_with = "inline")]
    fixture: Option<String>,
    /// Preorder in the text format, with `;` separating lines.
    #[arg(long, global = true)]
    inline: Option<String>,
    /// Prime modulus of the base field.
    #[arg(long, global = true, default_value_t = 2)]
    field: u32,
    /// Group spec: Z6, S3, D4, Z2xZ3 or table:<path>.
    #[arg(long, global = true, default_value = "Z2")]
    group: String,
    /// Largest search space any exhaustive step may scan.
    #[arg(long, global = true, default_value_t = 1 << 24, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Classes, quotient poset, Hasse diagram, components, antichain count, |Aut0|.
    Analyze,
    /// Antichains with meet and join tables.
    Lattice,
    /// Automorphism group orders and a Coelho decomposition sample.
    Aut,
    /// Whether every transitive function into the group is trivial.
    Triviality,
    /// Orbits of graded flags under the classifying action.
    Classify,
    /// Brute-force cross-checks.
    Oracle,
}

#[derive(Debug, Error)]
enum InputError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("unknown fixture `{0}`")]
    Fixture(String),
    #[error("no preorder given (use --preorder, --fixture or --inline)")]
    NoPreorder,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

fn load_job(opts: &Options) -> Result<Job, InputError> {
    let preorder = if let Some(path) = &opts.preorder {
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Read {
            path: path.display().to_string(),
            source,
        })?;
        let closure = parse_preorder(&text)?;
        if !closure.was_closed {
            eprintln!("warning: relation in {} is not transitive; using its closure", path.display());
        }
        closure.preorder
    } else if let Some(text) = &opts.inline {
        let closure = parse_preorder(&text.replace(';', "\n"))?;
        if !closure.was_closed {
            eprintln!("warning: inline relation is not transitive; using its closure");
        }
        closure.preorder
    } else if let Some(name) = &opts.fixture {
        fixtures::by_name(name).ok_or_else(|| InputError::Fixture(name.clone()))?
    } else {
        return Err(InputError::NoPreorder);
    };
    Ok(Job {
        preorder,
        field: PrimeField::new(opts.field)?,
        group: GroupSpec::parse(&opts.group)?.build()?,
        budget: opts.budget,
        seed: opts.seed,
    })
}

fn run(cli: &Cli) -> Result<(String, Status), InputError> {
    if let Some(jobs) = cli.opts.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build_global()?;
    }
    let job = load_job(&cli.opts)?;
    let (report, status) = match cli.command {
        Command::Analyze => commands::analyze(&job),
        Command::Lattice => commands::lattice(&job)?,
        Command::Aut => commands::aut(&job),
        Command::Triviality => commands::triviality(&job),
        Command::Classify => commands::classify(&job),
        Command::Oracle => commands::oracle(&job),
    };
    Ok((report.render(cli.opts.format), status))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok((out, status)) => {
            print!("{out}");
            match status {
                Status::Done => ExitCode::SUCCESS,
                Status::Undecided => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
