use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use ael::formats::{parse_dimacs, parse_qdimacs_lite};
use ael::output::{render_plan, render_report, Format};
use ael::{load_kb, parallel, selftest};
use ael_core::dispatch::plan;
use ael_core::fullset::DEFAULT_CAP;
use ael_core::reductions::{self, GenConfig};
use ael_core::syntax::{parse_formula, render_kb};
use ael_core::{CloneName, Formula, KnowledgeBase, SolveOptions, Task};
use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

/// Stable-expansion reasoning for propositional autoepistemic logic.
///
/// Knowledge-base files start with a `sig:` line naming the allowed
/// connectives (and, or, not, xor, 0, 1, id, or user definitions given by
/// `def <name> <arity> <truth table bits>` lines), followed by one premise per
/// line. `L φ` is the belief operator.
#[derive(Parser, Debug)]
#[command(name = "ael", version)]
struct Cli {
    /// Output format: `text` or `records` (tab-separated key/value lines)
    #[arg(long, global = true, default_value = "text")]
    format: Format,

    /// Worker threads for kernel enumeration
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Largest number of L-subformulae to enumerate kernels over
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,

    /// Always enumerate kernels with search-based entailment
    #[arg(long, global = true)]
    force_general: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the clone of the signature and the algorithm it selects
    Classify { file: PathBuf },
    /// Does a stable expansion exist?
    Exp { file: PathBuf },
    /// Does a consistent stable expansion exist?
    Expc { file: PathBuf },
    /// Is the query in some stable expansion?
    Brave {
        file: PathBuf,
        #[arg(long)]
        query: String,
    },
    /// Is the query in every stable expansion?
    Cautious {
        file: PathBuf,
        #[arg(long)]
        query: String,
    },
    /// Number of stable expansions
    Count { file: PathBuf },
    /// Kernels of all stable expansions
    List { file: PathBuf },
    /// Translate an instance into a knowledge base, printed to standard output
    Reduce {
        #[command(subcommand)]
        kind: Reduction,
    },
    /// Print a random knowledge base over the standard base of a clone
    Gen {
        /// One of BF, M, V, L, E, N, I
        #[arg(long)]
        profile: CloneName,
        #[arg(long, default_value_t = 4)]
        atoms: usize,
        #[arg(long, default_value_t = 5)]
        premises: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound on the number of distinct L-subformulae
        #[arg(long)]
        max_l_subformulas: Option<usize>,
    },
    /// Run randomized differential checks between the solvers
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instances per suite
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Reduction {
    /// DIMACS CNF: expansions correspond to models over the occurring variables
    #[command(name = "3sat")]
    ThreeSat { file: PathBuf },
    /// QDIMACS-lite ∃∀ DNF: an expansion exists iff the formula is valid.
    ///
    /// Format: `p dnf <vars> <terms>`, then `e <vars> 0`, then `a <vars> 0`,
    /// then one term per line as literals ending in 0 (`0` alone is the
    /// empty, true term). Lines starting with `c` are comments.
    Qbf2 { file: PathBuf },
    /// Premises of FILE (belief-free) plus `L query`: an expansion exists iff
    /// the premises entail the query
    Imp {
        file: PathBuf,
        #[arg(long)]
        query: String,
    },
    /// Affine FILE plus `L query ^ p ^ 1` and `L p`: an expansion exists iff
    /// the query is bravely entailed
    Brave {
        file: PathBuf,
        #[arg(long)]
        query: String,
    },
    /// Affine FILE plus `L query ^ p` and `L p`: a consistent expansion
    /// exists iff the query is not cautiously entailed
    Cautious {
        file: PathBuf,
        #[arg(long)]
        query: String,
    },
    /// Replace the constants 1 and 0 by a fresh atom t and a fresh belief L f
    Constants { file: PathBuf },
}

fn query(kb: &KnowledgeBase, text: &str) -> Result<Formula> {
    parse_formula(text, kb.signature()).with_context(|| format!("parsing query '{text}'"))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn reduce(kind: &Reduction) -> Result<KnowledgeBase> {
    Ok(match kind {
        Reduction::ThreeSat { file } => {
            let cnf = parse_dimacs(&read(file)?)
                .with_context(|| format!("parsing {}", file.display()))?;
            reductions::threesat_to_exp(&cnf)?
        }
        Reduction::Qbf2 { file } => {
            let q = parse_qdimacs_lite(&read(file)?)
                .with_context(|| format!("parsing {}", file.display()))?;
            reductions::qbf2_to_exp(&q)?
        }
        Reduction::Imp { file, query: q } => {
            let kb = load_kb(file)?;
            let psi = query(&kb, q)?;
            reductions::imp_to_exp(kb.signature(), kb.premises(), &psi)?
        }
        Reduction::Brave { file, query: q } => {
            let kb = load_kb(file)?;
            reductions::brave_to_exp(&kb, &query(&kb, q)?)?
        }
        Reduction::Cautious { file, query: q } => {
            let kb = load_kb(file)?;
            reductions::cautious_to_expstar(&kb, &query(&kb, q)?)?
        }
        Reduction::Constants { file } => reductions::eliminate_constants(&load_kb(file)?)?,
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let options = SolveOptions {
        force_general: cli.force_general,
        cap: cli.cap,
    };
    match &cli.command {
        Command::Classify { file } => {
            let start = Instant::now();
            let (clone, algorithm) = plan(&load_kb(file)?, &options);
            print!(
                "{}",
                render_plan(cli.format, clone, algorithm, start.elapsed())
            );
        }
        Command::Exp { file } => solve_file(cli, &options, file, |_| Ok(Task::Exp))?,
        Command::Expc { file } => solve_file(cli, &options, file, |_| Ok(Task::ExpConsistent))?,
        Command::Count { file } => solve_file(cli, &options, file, |_| Ok(Task::Count))?,
        Command::List { file } => solve_file(cli, &options, file, |_| Ok(Task::List))?,
        Command::Brave { file, query: q } => {
            solve_file(cli, &options, file, |kb| Ok(Task::Brave(query(kb, q)?)))?
        }
        Command::Cautious { file, query: q } => {
            solve_file(cli, &options, file, |kb| Ok(Task::Cautious(query(kb, q)?)))?
        }
        Command::Reduce { kind } => print!("{}", render_kb(&reduce(kind)?)),
        Command::Gen {
            profile,
            atoms,
            premises,
            seed,
            max_l_subformulas,
        } => {
            let mut config = GenConfig::new(*profile, *atoms, *premises, *seed);
            config.max_l_subformulas = *max_l_subformulas;
            print!("{}", render_kb(&reductions::generate(&config)?));
        }
        Command::Selftest { seed, cases } => {
            let results = selftest::run(*seed, *cases)?;
            for r in &results {
                let status = if r.ok() { "ok" } else { "FAILED" };
                println!("{:<12} {status} {}/{}", r.name, r.passed, r.total);
            }
            if !results.iter().all(selftest::SuiteResult::ok) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn solve_file(
    cli: &Cli,
    options: &SolveOptions,
    file: &Path,
    task: impl FnOnce(&KnowledgeBase) -> Result<Task>,
) -> Result<()> {
    let kb = load_kb(file)?;
    let task = task(&kb)?;
    let start = Instant::now();
    let report = parallel::solve(&kb, &task, options, cli.jobs)?;
    print!(
        "{}",
        render_report(cli.format, &task, &report, start.elapsed())
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let cap = err
                .chain()
                .any(|e| matches!(e.downcast_ref(), Some(ael_core::Error::CapExceeded { .. })));
            ExitCode::from(if cap { 2 } else { 1 })
        }
    }
}
