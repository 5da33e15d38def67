//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use ael_core::affine;
use ael_core::clones::{classify_with_constants, table_over, CloneName};
use ael_core::dispatch::{solve, Answer, SolveOptions, Task};
use ael_core::entailment::{self, Abstraction, Strategy};
use ael_core::formula::{Connective, Formula, KnowledgeBase, Signature};
use ael_core::fullset::{FullSets, Options};
use ael_core::reductions::{
    self, eliminate_constants, oracle_count_models, oracle_qbf2_valid, qbf2_to_exp,
    threesat_to_exp, Cnf, GenConfig, Qbf2,
};
use ael_core::simple;
use ael_core::syntax::parse_kb;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn count(kb: &KnowledgeBase) -> BigUint {
    match solve(kb, &Task::Count, &SolveOptions::default())
        .unwrap()
        .answer
    {
        Answer::Count(n) => n,
        Answer::Bool(_) => unreachable!("count task"),
    }
}

fn general(kb: &KnowledgeBase) -> FullSets<'_> {
    FullSets::new(kb, Options::default()).unwrap()
}

fn toy_instances() -> Outcome {
    let cases: [(&str, &str, u32); 5] = [
        ("{Lp}", "sig: xor,1\nLp\n", 0),
        ("{}", "sig: xor,1\n", 1),
        ("{p^Lp}", "sig: xor,1\np ^ Lp\n", 2),
        ("{p^Lp^1}", "sig: xor,1\np ^ Lp ^ 1\n", 0),
        ("{p, p^1}", "sig: xor,1\np\np ^ 1\n", 1),
    ];
    let start = Instant::now();
    let mut wrong = Vec::new();
    for (name, text, expected) in cases {
        let got = count(&parse_kb(text).unwrap());
        if got != BigUint::from(expected) {
            wrong.push(format!("{name}: expected {expected}, got {got}"));
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(1);
    let detail = if wrong.is_empty() {
        format!("5/5 exact in {elapsed:?}")
    } else {
        format!(
            "{} of 5 differ ({}) in {elapsed:?}",
            wrong.len(),
            wrong.join("; ")
        )
    };
    outcome(wrong.is_empty() && fast, detail)
}

fn random_cnf(rng: &mut ChaCha8Rng) -> Cnf {
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
    Cnf { num_vars, clauses }
}

fn parsimony() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut wrong = 0;
    for _ in 0..100 {
        let cnf = random_cnf(&mut rng);
        let models = oracle_count_models(&cnf.to_formula()).unwrap();
        if count(&threesat_to_exp(&cnf).unwrap()) != BigUint::from(models) {
            wrong += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        wrong == 0 && elapsed < Duration::from_secs(300),
        format!("{} of 100 match in {elapsed:?}", 100 - wrong),
    )
}

/// Every formula `∃x⃗ ∀y⃗ ⋁ terms` with at most two variables in each block and
/// at most three distinct terms.
fn qbf_family() -> Vec<Qbf2> {
    let mut out = Vec::new();
    for e in 0..=2u32 {
        for a in 0..=2u32 {
            let vars: Vec<u32> = (1..=e + a).collect();
            // Each variable is absent, positive or negative in a term.
            let terms: Vec<Vec<i32>> = (0..3usize.pow(vars.len() as u32))
                .map(|mut code| {
                    let mut t = Vec::new();
                    for &v in &vars {
                        match code % 3 {
                            1 => t.push(v as i32),
                            2 => t.push(-(v as i32)),
                            _ => {}
                        }
                        code /= 3;
                    }
                    t
                })
                .collect();
            let n = terms.len();
            let mut push = |chosen: &[usize]| {
                out.push(Qbf2 {
                    exists: (1..=e).collect(),
                    forall: (e + 1..=e + a).collect(),
                    terms: chosen.iter().map(|&i| terms[i].clone()).collect(),
                })
            };
            push(&[]);
            for i in 0..n {
                push(&[i]);
                for j in i + 1..n {
                    push(&[i, j]);
                    for k in j + 1..n {
                        push(&[i, j, k]);
                    }
                }
            }
        }
    }
    out
}

fn qbf2() -> Outcome {
    let start = Instant::now();
    let family = qbf_family();
    let mut wrong = 0;
    for q in &family {
        let valid = oracle_qbf2_valid(q).unwrap();
        let kb = qbf2_to_exp(q).unwrap();
        let exp = solve(&kb, &Task::Exp, &SolveOptions::default())
            .unwrap()
            .answer;
        if exp != Answer::Bool(valid) {
            wrong += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        wrong == 0 && elapsed < Duration::from_secs(300),
        format!(
            "{} of {} match in {elapsed:?}",
            family.len() - wrong,
            family.len()
        ),
    )
}

fn affine_corpus() -> Vec<KnowledgeBase> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..200)
        .map(|i| {
            let mut config = GenConfig::new(
                CloneName::L,
                rng.random_range(1..=8),
                rng.random_range(1..=6),
                1000 + i,
            );
            config.max_l_subformulas = Some(6);
            reductions::generate(&config).unwrap()
        })
        .collect()
}

/// Queries over the same atoms and signature as `kb`.
fn queries(kb: &KnowledgeBase, profile: CloneName, seed: u64) -> Vec<Formula> {
    let atoms = kb.atoms().len().max(1);
    let mut config = GenConfig::new(profile, atoms, 5, seed);
    config.max_l_subformulas = Some(4);
    config.max_belief_depth = 1;
    reductions::generate(&config).unwrap().premises().to_vec()
}

fn affine_differential(corpus: &[KnowledgeBase]) -> Outcome {
    let start = Instant::now();
    let mut wrong = 0;
    for kb in corpus {
        let analysis = affine::analyze(kb).unwrap();
        let kernels = analysis.kernels(12).unwrap();
        let expected = general(kb).kernels().unwrap();
        if kernels != expected || analysis.report.total() != BigUint::from(expected.len()) {
            wrong += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        wrong == 0 && elapsed < Duration::from_secs(300),
        format!("{} of 200 identical in {elapsed:?}", 200 - wrong),
    )
}

fn affine_reasoning(corpus: &[KnowledgeBase]) -> Outcome {
    let mut wrong = 0;
    let mut total = 0;
    for (i, kb) in corpus.iter().enumerate() {
        let fs = general(kb);
        for phi in queries(kb, CloneName::L, 5000 + i as u64) {
            total += 1;
            let brave = affine::brave_affine(kb, &phi).unwrap();
            let cautious = affine::cautious_affine(kb, &phi).unwrap();
            if brave != fs.brave(&phi).unwrap().is_some() || cautious != fs.cautious(&phi).unwrap()
            {
                wrong += 1;
            }
        }
    }
    outcome(
        wrong == 0,
        format!("{} of {total} queries agree", total - wrong),
    )
}

fn simple_differential() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut wrong = 0;
    let mut too_many = 0;
    for i in 0..200u64 {
        let profile = if i % 2 == 0 {
            CloneName::E
        } else {
            CloneName::N
        };
        let mut config = GenConfig::new(
            profile,
            rng.random_range(1..=6),
            rng.random_range(1..=20),
            7000 + i,
        );
        config.max_l_subformulas = Some(12);
        let kb = reductions::generate(&config).unwrap();
        let s = simple::solve_simple(&kb).unwrap();
        let fs = general(&kb);
        let kernels = fs.kernels().unwrap();
        let mut same = s.kernels() == kernels && s.count() == kernels.len() as u64;
        for phi in queries(&kb, profile, 9000 + i) {
            same &= s.brave(&phi).unwrap().is_some() == fs.brave(&phi).unwrap().is_some();
            same &= s.cautious(&phi).unwrap() == fs.cautious(&phi).unwrap();
        }
        let consistent = kernels
            .iter()
            .filter(|k| fs.is_consistent(k).unwrap())
            .count();
        too_many += usize::from(consistent > 1);
        wrong += usize::from(!same);
    }
    outcome(
        wrong == 0 && too_many == 0,
        format!(
            "{} of 200 identical, {too_many} with more than one consistent expansion, in {:?}",
            200 - wrong,
            start.elapsed()
        ),
    )
}

fn consistent_count(kb: &KnowledgeBase) -> usize {
    let fs = general(kb);
    let kernels = fs.kernels().unwrap();
    kernels
        .iter()
        .filter(|k| fs.is_consistent(k).unwrap())
        .count()
}

fn constant_elimination() -> Outcome {
    let profiles = [
        CloneName::BF,
        CloneName::M,
        CloneName::V,
        CloneName::L,
        CloneName::E,
        CloneName::N,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut wrong = Vec::new();
    let mut consistent_differ = 0;
    for i in 0..100u64 {
        let profile = profiles[i as usize % profiles.len()];
        let mut config = GenConfig::new(
            profile,
            rng.random_range(1..=4),
            rng.random_range(1..=4),
            11000 + i,
        );
        config.max_l_subformulas = Some(8);
        let kb = reductions::generate(&config).unwrap();
        let eliminated = eliminate_constants(&kb).unwrap();
        let (before, after) = (count(&kb), count(&eliminated));
        if before != after {
            wrong.push(format!("#{i} {profile}: {before} vs {after}"));
        }
        consistent_differ += usize::from(consistent_count(&kb) != consistent_count(&eliminated));
    }
    let shown: Vec<&str> = wrong.iter().take(3).map(String::as_str).collect();
    let examples = if wrong.is_empty() {
        String::new()
    } else {
        format!(", e.g. {}", shown.join("; "))
    };
    outcome(
        wrong.is_empty(),
        format!(
            "{} of 100 invariant{examples}; consistent-expansion counts differ on {consistent_differ}",
            100 - wrong.len()
        ),
    )
}

fn random_formula(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    atoms: &[String],
    depth: usize,
) -> Formula {
    let gates: Vec<_> = sig.connectives().filter(|c| c.arity() > 0).collect();
    let constants: Vec<_> = sig.connectives().filter(|c| c.arity() == 0).collect();
    if depth == 0 || rng.random_bool(0.3) {
        if !constants.is_empty() && rng.random_bool(0.15) {
            let c = constants[rng.random_range(0..constants.len())];
            return Formula::apply(&std::sync::Arc::new(c.clone()), Vec::new());
        }
        return Formula::atom(atoms[rng.random_range(0..atoms.len())].clone());
    }
    let c = std::sync::Arc::new(gates[rng.random_range(0..gates.len())].clone());
    let args = (0..c.arity())
        .map(|_| random_formula(rng, sig, atoms, depth - 1))
        .collect();
    Formula::apply(&c, args)
}

fn classifier() -> Outcome {
    let start = Instant::now();
    let mut bases_ok = 0;
    for clone in CloneName::ALL {
        let sig = Signature::builtin(clone.base()).unwrap();
        bases_ok += usize::from(classify_with_constants(&sig) == clone);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut escaped = 0;
    for _ in 0..1000 {
        let clone = CloneName::ALL[rng.random_range(0..CloneName::ALL.len())];
        let sig = Signature::builtin(clone.base()).unwrap();
        let atoms: Vec<String> = (1..=rng.random_range(1..=4))
            .map(|i| format!("a{i}"))
            .collect();
        let f = random_formula(&mut rng, &sig, &atoms, 4);
        let table = table_over(&f, &atoms).unwrap();
        let composed = Connective::new("g", table.clone()).unwrap();
        let mut connectives: Vec<Connective> = sig.connectives().cloned().collect();
        connectives.push(composed);
        let extended = Signature::new(connectives).unwrap();
        if !clone.contains_function(&table) || classify_with_constants(&extended) != clone {
            escaped += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bases_ok == 7 && escaped == 0 && elapsed < Duration::from_secs(60),
        format!(
            "{bases_ok}/7 bases, {escaped} of 1000 composed connectives escaped, in {elapsed:?}"
        ),
    )
}

fn strategy_agreement() -> Outcome {
    let profiles = [
        CloneName::BF,
        CloneName::M,
        CloneName::V,
        CloneName::L,
        CloneName::E,
        CloneName::N,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut wrong = 0;
    let mut done = 0;
    let mut specialized = 0;
    let mut seed = 13000;
    while done < 500 {
        seed += 1;
        let profile = profiles[done % profiles.len()];
        let config = GenConfig::new(
            profile,
            rng.random_range(1..=6),
            rng.random_range(1..=5),
            seed,
        );
        let kb = reductions::generate(&config).unwrap();
        let (phi, gamma) = kb.premises().split_last().expect("nonempty");
        let mut abs = Abstraction::new();
        kb.premises().iter().for_each(|p| {
            abs.lower(p);
        });
        if abs.len() > 10 {
            continue;
        }
        done += 1;
        let mut strategies = vec![Strategy::BruteForce, Strategy::Search];
        if let Some(s) = Strategy::specialized_for(profile) {
            strategies.push(s);
            specialized += 1;
        }
        let answers: BTreeSet<(bool, bool)> = strategies
            .iter()
            .map(|&s| {
                (
                    entailment::entails(gamma, phi, s).unwrap(),
                    entailment::consistent(gamma, s).unwrap(),
                )
            })
            .collect();
        wrong += usize::from(answers.len() != 1);
    }
    outcome(
        wrong == 0,
        format!(
            "{} of 500 agree ({specialized} with a fragment strategy)",
            500 - wrong
        ),
    )
}

fn l_atomic_system(n: usize, seed: u64) -> KnowledgeBase {
    let sig = Signature::builtin(&["xor", "1"]).unwrap();
    let xor = sig.get("xor").unwrap().clone();
    let one = Formula::apply(sig.get("1").unwrap(), Vec::new());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atom = |i: usize| Formula::atom(format!("x{i}"));
    let premises = (0..n)
        .map(|_| {
            let mut terms: Vec<Formula> = (0..3).map(|_| atom(rng.random_range(0..n))).collect();
            terms.extend((0..2).map(|_| Formula::belief(atom(rng.random_range(0..n)))));
            if rng.random_bool(0.5) {
                terms.push(one.clone());
            }
            let mut it = terms.into_iter();
            let first = it.next().unwrap();
            it.fold(first, |acc, t| Formula::apply(&xor, vec![acc, t]))
        })
        .collect();
    KnowledgeBase::new(sig, premises).unwrap()
}

fn scaling() -> Outcome {
    let sizes = [500usize, 1000, 2000];
    let mut times = Vec::new();
    for &n in &sizes {
        let kb = l_atomic_system(n, 10 + n as u64);
        let best = (0..3)
            .map(|_| {
                let start = Instant::now();
                affine::solve_affine(&kb).unwrap();
                start.elapsed()
            })
            .min()
            .unwrap();
        times.push(best);
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = times
        .iter()
        .map(|t| t.as_secs_f64().max(1e-6).ln())
        .collect();
    let mx = xs.iter().sum::<f64>() / 3.0;
    let my = ys.iter().sum::<f64>() / 3.0;
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let largest = times[2];
    outcome(
        largest < Duration::from_secs(10) && slope <= 3.5,
        format!(
            "n=500/1000/2000 took {:?}/{:?}/{:?}, exponent {slope:.2}",
            times[0], times[1], times[2]
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let corpus = affine_corpus();
    let criteria: Vec<Criterion> = vec![
        ("toy instances", Box::new(toy_instances)),
        ("3SAT parsimony", Box::new(parsimony)),
        ("2QBF validity", Box::new(qbf2)),
        (
            "affine vs general",
            Box::new(|| affine_differential(&corpus)),
        ),
        (
            "affine brave/cautious",
            Box::new(|| affine_reasoning(&corpus)),
        ),
        ("simple vs general", Box::new(simple_differential)),
        ("constant elimination", Box::new(constant_elimination)),
        ("clone classifier", Box::new(classifier)),
        ("strategy agreement", Box::new(strategy_agreement)),
        ("affine scaling", Box::new(scaling)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.passed);
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            name,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
