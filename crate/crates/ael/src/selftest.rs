//! Desk-scale differential checks run by `ael selftest`.

use ael_core::clones::CloneName;
use ael_core::dispatch::{solve, SolveOptions, Task};
use ael_core::entailment::{self, Strategy};
use ael_core::fullset::{FullSets, Options};
use ael_core::reductions::{self, oracle_count_models, oracle_qbf2_valid, Cnf, GenConfig, Qbf2};
use ael_core::{Answer, KnowledgeBase, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PROFILES: [CloneName; 6] = [
    CloneName::BF,
    CloneName::M,
    CloneName::V,
    CloneName::L,
    CloneName::E,
    CloneName::N,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
}

impl SuiteResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

fn random_kb(rng: &mut ChaCha8Rng, i: usize) -> Result<KnowledgeBase> {
    let mut config = GenConfig::new(
        PROFILES[i % PROFILES.len()],
        rng.random_range(1..=5),
        rng.random_range(1..=6),
        rng.random(),
    );
    config.max_l_subformulas = Some(8);
    reductions::generate(&config)
}

fn queries(kb: &KnowledgeBase, seed: u64) -> Result<Vec<ael_core::Formula>> {
    let mut config = GenConfig::new(kb.clone_name(), kb.atoms().len().max(1), 3, seed);
    config.max_belief_depth = 1;
    config.max_l_subformulas = Some(3);
    Ok(reductions::generate(&config)?
        .premises()
        .iter()
        .filter(|q| kb.check(q).is_ok())
        .cloned()
        .collect())
}

/// Routed answers equal kernel enumeration for every task, and every witness
/// is full under brute-force entailment.
fn routing(rng: &mut ChaCha8Rng, cases: usize) -> Result<SuiteResult> {
    let forced = SolveOptions {
        force_general: true,
        ..SolveOptions::default()
    };
    let mut passed = 0;
    for i in 0..cases {
        let kb = random_kb(rng, i)?;
        let brute = FullSets::new(
            &kb,
            Options {
                strategy: Strategy::BruteForce,
                ..Options::default()
            },
        )?;
        let mut tasks = vec![Task::Exp, Task::ExpConsistent, Task::Count, Task::List];
        for q in queries(&kb, rng.random())? {
            tasks.push(Task::Brave(q.clone()));
            tasks.push(Task::Cautious(q));
        }
        let mut ok = true;
        for task in &tasks {
            let routed = solve(&kb, task, &SolveOptions::default())?;
            let general = solve(&kb, task, &forced)?;
            ok &= routed.answer == general.answer && routed.vacuous == general.vacuous;
            for w in &routed.witnesses {
                ok &= brute.is_full(w)?;
            }
        }
        passed += usize::from(ok);
    }
    Ok(SuiteResult {
        name: "routing",
        passed,
        total: cases,
    })
}

fn strategies(rng: &mut ChaCha8Rng, cases: usize) -> Result<SuiteResult> {
    let mut passed = 0;
    for i in 0..cases {
        let kb = random_kb(rng, i)?;
        let (phi, gamma) = kb.premises().split_last().expect("at least one premise");
        let mut used = vec![Strategy::BruteForce, Strategy::Search];
        used.extend(Strategy::specialized_for(kb.clone_name()));
        let mut answers = Vec::new();
        for s in used {
            answers.push((
                entailment::entails(gamma, phi, s)?,
                entailment::consistent(gamma, s)?,
            ));
        }
        passed += usize::from(answers.windows(2).all(|w| w[0] == w[1]));
    }
    Ok(SuiteResult {
        name: "entailment",
        passed,
        total: cases,
    })
}

fn parsimony(rng: &mut ChaCha8Rng, cases: usize) -> Result<SuiteResult> {
    let mut passed = 0;
    for _ in 0..cases {
        let num_vars = rng.random_range(1..=4u32);
        let clauses = (0..rng.random_range(1..=4))
            .map(|_| {
                (0..rng.random_range(1..=3))
                    .map(|_| {
                        let v = rng.random_range(1..=num_vars) as i32;
                        if rng.random_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        let cnf = Cnf { num_vars, clauses };
        let models = oracle_count_models(&cnf.to_formula())?;
        let kb = reductions::threesat_to_exp(&cnf)?;
        let count = solve(&kb, &Task::Count, &SolveOptions::default())?.answer;
        passed += usize::from(count == Answer::Count(models.into()));
    }
    Ok(SuiteResult {
        name: "3sat",
        passed,
        total: cases,
    })
}

fn qbf(rng: &mut ChaCha8Rng, cases: usize) -> Result<SuiteResult> {
    let mut passed = 0;
    for _ in 0..cases {
        let e = rng.random_range(0..=2u32);
        let a = rng.random_range(0..=2u32);
        let n = e + a;
        let terms = (0..rng.random_range(0..=3))
            .map(|_| {
                (1..=n)
                    .filter_map(|v| match rng.random_range(0..3) {
                        0 => None,
                        1 => Some(v as i32),
                        _ => Some(-(v as i32)),
                    })
                    .collect()
            })
            .collect();
        let q = Qbf2 {
            exists: (1..=e).collect(),
            forall: (e + 1..=n).collect(),
            terms,
        };
        let kb = reductions::qbf2_to_exp(&q)?;
        let exp = solve(&kb, &Task::Exp, &SolveOptions::default())?.answer;
        passed += usize::from(exp == Answer::Bool(oracle_qbf2_valid(&q)?));
    }
    Ok(SuiteResult {
        name: "2qbf",
        passed,
        total: cases,
    })
}

/// Runs every suite with `cases` instances each.
pub fn run(seed: u64, cases: usize) -> Result<Vec<SuiteResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        routing(&mut rng, cases)?,
        strategies(&mut rng, cases)?,
        parsimony(&mut rng, cases)?,
        qbf(&mut rng, cases)?,
    ])
}
