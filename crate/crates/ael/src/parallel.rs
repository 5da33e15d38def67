//! Kernel enumeration split across worker threads.

use std::thread;

use ael_core::dispatch::{self, candidate_count, finish, plan, solve_range, RangeOutcome};
use ael_core::{KnowledgeBase, Result, SolveOptions, SolveReport, Task};

/// Like [`dispatch::solve`], but enumerating algorithms split the candidate
/// kernels into `jobs` contiguous ranges. Answers and witnesses do not depend
/// on `jobs`; the statistics may.
pub fn solve(
    kb: &KnowledgeBase,
    task: &Task,
    options: &SolveOptions,
    jobs: usize,
) -> Result<SolveReport> {
    let (clone, algorithm) = plan(kb, options);
    if jobs <= 1 || algorithm.strategy().is_none() {
        return dispatch::solve(kb, task, options);
    }
    let total = candidate_count(kb, algorithm, options)?;
    let chunk = total.div_ceil(jobs as u64).max(1);
    let ranges: Vec<_> = (0..total)
        .step_by(chunk as usize)
        .map(|start| start..(start + chunk).min(total))
        .collect();
    let outcomes: Vec<Result<RangeOutcome>> = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|range| scope.spawn(move || solve_range(kb, task, algorithm, options, range)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    finish(clone, algorithm, task, outcomes)
}
