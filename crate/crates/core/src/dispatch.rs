//! Classifies a knowledge base by its declared signature and routes each
//! reasoning task to the matching solver.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{ControlFlow, Range};

use num_bigint::BigUint;

use crate::affine;
use crate::clones::CloneName;
use crate::entailment::Strategy;
use crate::error::{Error, Result};
use crate::formula::{Formula, KnowledgeBase};
use crate::fullset::{self, FullSets, Kernel};
use crate::reductions;
use crate::simple;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    /// Some stable expansion exists.
    Exp,
    /// Some consistent stable expansion exists.
    ExpConsistent,
    /// The formula is in some stable expansion.
    Brave(Formula),
    /// The formula is in every stable expansion.
    Cautious(Formula),
    /// Number of stable expansions.
    Count,
    /// Every kernel, with their number as the answer.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Kernel enumeration with satisfiability-based entailment.
    FullsetSat,
    /// Kernel enumeration with clause-implication entailment.
    FullsetImplication,
    Affine,
    Simple,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::FullsetSat => "fullset+sat",
            Algorithm::FullsetImplication => "fullset+poly-implication",
            Algorithm::Affine => "affine",
            Algorithm::Simple => "simple",
        }
    }

    /// Entailment strategy of the enumerating algorithms.
    pub fn strategy(self) -> Option<Strategy> {
        match self {
            Algorithm::FullsetSat => Some(Strategy::Search),
            Algorithm::FullsetImplication => Some(Strategy::Disjunctive),
            Algorithm::Affine | Algorithm::Simple => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Bool(bool),
    Count(BigUint),
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Bool(b) => write!(f, "{b}"),
            Answer::Count(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Use kernel enumeration with the search strategy whatever the clone.
    pub force_general: bool,
    /// Bound on `|SF^L(Σ)|` for enumeration, and on the free dimension for
    /// listing affine kernels.
    pub cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            force_general: false,
            cap: fullset::DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub candidates: u64,
    pub entailment_calls: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub clone: CloneName,
    pub algorithm: Algorithm,
    pub answer: Answer,
    /// Kernels supporting the answer: one expansion for a positive existence
    /// or brave answer, a counterexample for a negative cautious answer, and
    /// every kernel for [`Task::List`].
    pub witnesses: Vec<Kernel>,
    /// A cautious answer that holds only because there is no expansion.
    pub vacuous: bool,
    pub stats: SolveStats,
}

/// The clone of the declared signature and the algorithm it selects.
pub fn plan(kb: &KnowledgeBase, options: &SolveOptions) -> (CloneName, Algorithm) {
    let clone = kb.clone_name();
    let algorithm = if options.force_general {
        Algorithm::FullsetSat
    } else {
        match clone {
            CloneName::BF | CloneName::M => Algorithm::FullsetSat,
            CloneName::V => Algorithm::FullsetImplication,
            CloneName::L => Algorithm::Affine,
            CloneName::E | CloneName::N | CloneName::I => Algorithm::Simple,
        }
    };
    (clone, algorithm)
}

pub fn solve(kb: &KnowledgeBase, task: &Task, options: &SolveOptions) -> Result<SolveReport> {
    let (clone, algorithm) = plan(kb, options);
    match algorithm {
        Algorithm::FullsetSat | Algorithm::FullsetImplication => {
            let total = candidate_count(kb, algorithm, options)?;
            let outcome = solve_range(kb, task, algorithm, options, 0..total)?;
            finish(clone, algorithm, task, [outcome])
        }
        Algorithm::Affine => solve_affine(kb, task, options, clone),
        Algorithm::Simple => solve_simple(kb, task, clone),
    }
}

/// Partial result of an enumerating algorithm over a range of kernel masks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RangeOutcome {
    /// Full kernels visited (all of them unless the search stopped early).
    pub full: u64,
    /// Kernels of interest: every kernel for counting and listing (listing
    /// only), otherwise the first hit in the range.
    pub found: Vec<Kernel>,
    pub stats: SolveStats,
}

/// Number of candidate kernels of an enumerating algorithm.
pub fn candidate_count(
    kb: &KnowledgeBase,
    algorithm: Algorithm,
    options: &SolveOptions,
) -> Result<u64> {
    enumerator(kb, algorithm, options)?.candidate_count()
}

fn enumerator<'a>(
    kb: &'a KnowledgeBase,
    algorithm: Algorithm,
    options: &SolveOptions,
) -> Result<FullSets<'a>> {
    let strategy = algorithm.strategy().ok_or(Error::StrategyNotApplicable(
        "algorithm does not enumerate kernels",
    ))?;
    FullSets::new(
        kb,
        fullset::Options {
            strategy,
            cap: options.cap,
        },
    )
}

/// Runs an enumerating algorithm on the kernel masks in `masks`. Ranges may
/// be processed independently and combined with [`finish`].
pub fn solve_range(
    kb: &KnowledgeBase,
    task: &Task,
    algorithm: Algorithm,
    options: &SolveOptions,
    masks: Range<u64>,
) -> Result<RangeOutcome> {
    let fs = enumerator(kb, algorithm, options)?;
    let lf = fs.l_subformulae().to_vec();
    if let Task::Brave(phi) | Task::Cautious(phi) = task {
        kb.check(phi)?;
    }
    let mut out = RangeOutcome::default();
    fs.for_each_in(masks, |mask, _| {
        out.full += 1;
        let kernel = Kernel::from_mask(&lf, mask);
        let hit = match task {
            Task::Count => false,
            Task::List => {
                out.found.push(kernel);
                return Ok(ControlFlow::Continue(()));
            }
            Task::Exp => true,
            Task::ExpConsistent => fs.is_consistent(&kernel)?,
            Task::Brave(phi) => fs.models_l(&kernel, phi)?,
            Task::Cautious(phi) => !fs.models_l(&kernel, phi)?,
        };
        Ok(if hit {
            out.found.push(kernel);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        })
    })?;
    let stats = fs.stats();
    out.stats = SolveStats {
        candidates: stats.candidates,
        entailment_calls: stats.entailment_calls,
    };
    Ok(out)
}

/// Combines range outcomes, given in mask order, into a report.
pub fn finish(
    clone: CloneName,
    algorithm: Algorithm,
    task: &Task,
    outcomes: impl IntoIterator<Item = RangeOutcome>,
) -> Result<SolveReport> {
    let mut full = 0;
    let mut found = Vec::new();
    let mut stats = SolveStats::default();
    for o in outcomes {
        full += o.full;
        found.extend(o.found);
        stats.candidates += o.stats.candidates;
        stats.entailment_calls += o.stats.entailment_calls;
    }
    let first = found.first().cloned();
    let (answer, witnesses, vacuous) = match task {
        Task::Count => (Answer::Count(full.into()), Vec::new(), false),
        Task::List => (Answer::Count(full.into()), found, false),
        Task::Exp | Task::ExpConsistent | Task::Brave(_) => (
            Answer::Bool(first.is_some()),
            first.into_iter().collect(),
            false,
        ),
        Task::Cautious(_) => (
            Answer::Bool(first.is_none()),
            first.into_iter().collect(),
            full == 0,
        ),
    };
    Ok(SolveReport {
        clone,
        algorithm,
        answer,
        witnesses,
        vacuous,
        stats,
    })
}

fn report(
    clone: CloneName,
    algorithm: Algorithm,
    answer: Answer,
    witnesses: Vec<Kernel>,
) -> SolveReport {
    SolveReport {
        clone,
        algorithm,
        answer,
        witnesses,
        vacuous: false,
        stats: SolveStats::default(),
    }
}

/// Restricts a kernel of an extended knowledge base to the beliefs of `kb`.
fn restrict(kernel: Kernel, kb: &KnowledgeBase) -> Kernel {
    let lf = kb.sfl();
    kernel
        .iter()
        .filter(|(f, _)| lf.contains(*f))
        .map(|(f, s)| (f.clone(), s))
        .collect()
}

fn solve_affine(
    kb: &KnowledgeBase,
    task: &Task,
    options: &SolveOptions,
    clone: CloneName,
) -> Result<SolveReport> {
    let algorithm = Algorithm::Affine;
    let zero = BigUint::default();
    Ok(match task {
        Task::Exp => {
            let a = affine::analyze(kb)?;
            let w = a.witness();
            report(
                clone,
                algorithm,
                Answer::Bool(w.is_some()),
                w.into_iter().collect(),
            )
        }
        Task::ExpConsistent => {
            let w = affine::analyze(kb)?.consistent_witness();
            report(
                clone,
                algorithm,
                Answer::Bool(w.is_some()),
                w.into_iter().collect(),
            )
        }
        Task::Count => report(
            clone,
            algorithm,
            Answer::Count(affine::solve_affine(kb)?.total()),
            Vec::new(),
        ),
        Task::List => {
            let a = affine::analyze(kb)?;
            let kernels = a.kernels(options.cap).ok_or(Error::CapExceeded {
                found: a.report.free_dimension,
                cap: options.cap,
            })?;
            report(clone, algorithm, Answer::Count(a.report.total()), kernels)
        }
        Task::Brave(phi) => {
            let w = affine::analyze(&reductions::brave_to_exp(kb, phi)?)?.witness();
            let w = w.map(|k| restrict(k, kb));
            report(
                clone,
                algorithm,
                Answer::Bool(w.is_some()),
                w.into_iter().collect(),
            )
        }
        Task::Cautious(phi) => {
            let counter =
                affine::analyze(&reductions::cautious_to_expstar(kb, phi)?)?.consistent_witness();
            let counter = counter.map(|k| restrict(k, kb));
            let mut r = report(
                clone,
                algorithm,
                Answer::Bool(counter.is_none()),
                counter.into_iter().collect(),
            );
            r.vacuous = r.answer == Answer::Bool(true) && affine::solve_affine(kb)?.total() == zero;
            r
        }
    })
}

fn solve_simple(kb: &KnowledgeBase, task: &Task, clone: CloneName) -> Result<SolveReport> {
    let algorithm = Algorithm::Simple;
    let s = simple::solve_simple(kb)?;
    let found = |w: Option<Kernel>| (Answer::Bool(w.is_some()), w.into_iter().collect());
    let (answer, witnesses) = match task {
        Task::Exp => found(s.exp()),
        Task::ExpConsistent => found(s.exp_consistent()),
        Task::Brave(phi) => {
            kb.check(phi)?;
            found(s.brave(phi)?)
        }
        Task::Cautious(phi) => {
            kb.check(phi)?;
            let counter = s.cautious_counterexample(phi)?;
            let mut r = report(
                clone,
                algorithm,
                Answer::Bool(counter.is_none()),
                counter.into_iter().collect(),
            );
            r.vacuous = s.count() == 0;
            return Ok(r);
        }
        Task::Count => (Answer::Count(s.count().into()), Vec::new()),
        Task::List => (Answer::Count(s.count().into()), s.kernels()),
    };
    Ok(report(clone, algorithm, answer, witnesses))
}
