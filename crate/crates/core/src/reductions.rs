//! Reductions into stable-expansion problems, brute-force reference oracles
//! and a seeded random knowledge-base generator.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clones::CloneName;
use crate::error::{Error, Result};
use crate::formula::{sfl_all, Connective, Formula, FreshNames, KnowledgeBase, Signature};

/// A CNF formula with DIMACS-style literals: `i` for `x_i`, `-i` for `¬x_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

/// `∃ exists ∀ forall ⋁ terms`, each term a conjunction of DIMACS-style
/// literals. An empty term is true; no terms at all is false.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Qbf2 {
    pub exists: Vec<u32>,
    pub forall: Vec<u32>,
    pub terms: Vec<Vec<i32>>,
}

fn var_name(prefix: &str, v: u32) -> String {
    format!("{prefix}{v}")
}

fn or_all(or: &alloc::sync::Arc<Connective>, mut items: Vec<Formula>) -> Formula {
    let first = items.remove(0);
    items
        .into_iter()
        .fold(first, |acc, f| Formula::apply(or, vec![acc, f]))
}

/// `v ∨ Lv′` and `Lv ∨ v′`: exactly one of `Lv`, `Lv′` is believed in any
/// expansion, and that choice fixes `v`.
fn choice_gadget(or: &alloc::sync::Arc<Connective>, v: &str, v_neg: &str) -> [Formula; 2] {
    let (a, b) = (Formula::atom(v), Formula::atom(v_neg));
    [
        Formula::apply(or, vec![a.clone(), Formula::belief(b.clone())]),
        Formula::apply(or, vec![Formula::belief(a), b]),
    ]
}

impl Cnf {
    /// Variables occurring in some clause, in increasing order.
    pub fn occurring_vars(&self) -> BTreeSet<u32> {
        self.clauses
            .iter()
            .flatten()
            .map(|l| l.unsigned_abs())
            .collect()
    }

    /// The CNF over atoms `x1, x2, …` in the signature `{and, or, not, 0, 1}`.
    pub fn to_formula(&self) -> Formula {
        let sig = Signature::builtin(&["and", "or", "not", "0", "1"]).expect("built-ins");
        let (and, or, not) = (sig.op("and"), sig.op("or"), sig.op("not"));
        let lit = |l: i32| {
            let a = Formula::atom(var_name("x", l.unsigned_abs()));
            if l < 0 {
                Formula::apply(&not, vec![a])
            } else {
                a
            }
        };
        let clauses: Vec<Formula> = self
            .clauses
            .iter()
            .map(|c| match c.is_empty() {
                true => Formula::apply(&sig.op("0"), Vec::new()),
                false => or_all(&or, c.iter().map(|&l| lit(l)).collect()),
            })
            .collect();
        match clauses.is_empty() {
            true => Formula::apply(&sig.op("1"), Vec::new()),
            false => {
                let mut it = clauses.into_iter();
                let first = it.next().expect("nonempty");
                it.fold(first, |acc, f| Formula::apply(&and, vec![acc, f]))
            }
        }
    }
}

/// `{Lc′ | c ∈ φ} ∪ {x ∨ Lx′, Lx ∨ x′ | x occurs in φ}` over `{or}`, where `c′`
/// renames `¬x` to the atom `x′`. The stable expansions correspond one to one
/// with the models of `φ` over its occurring variables. Atoms are `x{i}` and
/// `nx{i}`.
pub fn threesat_to_exp(cnf: &Cnf) -> Result<KnowledgeBase> {
    if let Some(i) = cnf.clauses.iter().position(Vec::is_empty) {
        return Err(Error::InvalidInput(format!("clause {} is empty", i + 1)));
    }
    let sig = Signature::builtin(&["or"])?;
    let or = sig.op("or");
    let lit = |l: i32| {
        let prefix = if l < 0 { "nx" } else { "x" };
        Formula::atom(var_name(prefix, l.unsigned_abs()))
    };
    let mut premises: Vec<Formula> = cnf
        .clauses
        .iter()
        .map(|c| Formula::belief(or_all(&or, c.iter().map(|&l| lit(l)).collect())))
        .collect();
    for v in cnf.occurring_vars() {
        premises.extend(choice_gadget(&or, &var_name("x", v), &var_name("nx", v)));
    }
    KnowledgeBase::new(sig, premises)
}

/// `{Lψ′} ∪ {x ∨ Lx′, Lx ∨ x′ | x ∃-quantified} ∪ {y ∨ y′ | y ∀-quantified}`
/// over `{and, or}`, where `ψ′` renames negated variables to primed atoms.
/// Atoms are `x{i}`/`nx{i}` for existential and `y{i}`/`ny{i}` for
/// universal variables. The constant `1` (`0`) joins the signature only for
/// an empty term (an empty disjunction).
pub fn qbf2_to_exp(q: &Qbf2) -> Result<KnowledgeBase> {
    let exists: BTreeSet<u32> = q.exists.iter().copied().collect();
    let forall: BTreeSet<u32> = q.forall.iter().copied().collect();
    if let Some(v) = exists.intersection(&forall).next() {
        return Err(Error::InvalidInput(format!(
            "variable {v} quantified twice"
        )));
    }
    for l in q.terms.iter().flatten() {
        let v = l.unsigned_abs();
        if !exists.contains(&v) && !forall.contains(&v) {
            return Err(Error::InvalidInput(format!(
                "variable {v} is not quantified"
            )));
        }
    }
    let mut names = vec!["and", "or"];
    if q.terms.iter().any(Vec::is_empty) {
        names.push("1");
    }
    if q.terms.is_empty() {
        names.push("0");
    }
    let sig = Signature::builtin(&names)?;
    let (and, or) = (sig.op("and"), sig.op("or"));
    let lit = |l: i32| {
        let v = l.unsigned_abs();
        let base = if exists.contains(&v) { "x" } else { "y" };
        let prefix = if l < 0 {
            format!("n{base}")
        } else {
            String::from(base)
        };
        Formula::atom(var_name(&prefix, v))
    };
    let terms: Vec<Formula> = q
        .terms
        .iter()
        .map(|t| match t.split_first() {
            None => Formula::apply(&sig.op("1"), Vec::new()),
            Some((&first, rest)) => rest.iter().fold(lit(first), |acc, &l| {
                Formula::apply(&and, vec![acc, lit(l)])
            }),
        })
        .collect();
    let psi = match terms.is_empty() {
        true => Formula::apply(&sig.op("0"), Vec::new()),
        false => or_all(&or, terms),
    };
    let mut premises = vec![Formula::belief(psi)];
    for &v in &exists {
        premises.extend(choice_gadget(&or, &var_name("x", v), &var_name("nx", v)));
    }
    for &v in &forall {
        premises.push(Formula::apply(
            &or,
            vec![
                Formula::atom(var_name("y", v)),
                Formula::atom(var_name("ny", v)),
            ],
        ));
    }
    KnowledgeBase::new(sig, premises)
}

/// `Γ ∪ {Lψ}`: has a stable expansion iff `Γ ⊨ ψ`.
pub fn imp_to_exp(
    signature: &Signature,
    gamma: &[Formula],
    psi: &Formula,
) -> Result<KnowledgeBase> {
    if gamma.iter().chain([psi]).any(Formula::contains_belief) {
        return Err(Error::BeliefNotAllowed);
    }
    let mut premises = gamma.to_vec();
    premises.push(Formula::belief(psi.clone()));
    KnowledgeBase::new(signature.clone(), premises)
}

fn is_affine(kb: &KnowledgeBase) -> bool {
    kb.clone_name().is_subclone_of(CloneName::L)
}

/// `Σ ∪ {link, Lp}` for a fresh atom `p`, over the signature plus `xor`, `1`.
fn query_transform(kb: &KnowledgeBase, phi: &Formula, negate: bool) -> Result<KnowledgeBase> {
    if !is_affine(kb) {
        return Err(Error::NotAffine);
    }
    kb.check(phi)?;
    let signature = kb.signature().with_builtins(&["xor", "1"]);
    let mut taken = kb.atoms();
    taken.extend(phi.atoms());
    let p = Formula::atom(FreshNames::new(taken).fresh("aux"));
    let xor = signature.op("xor");
    let mut link = Formula::apply(&xor, vec![Formula::belief(phi.clone()), p.clone()]);
    if !negate {
        link = Formula::apply(
            &xor,
            vec![link, Formula::apply(&signature.op("1"), Vec::new())],
        );
    }
    kb.extended(signature, vec![link, Formula::belief(p)])
}

/// `Σ ∪ {Lφ ⊕ p ⊕ 1, Lp}`: has a stable expansion iff `φ` belongs to some
/// stable expansion of `Σ`.
pub fn brave_to_exp(kb: &KnowledgeBase, phi: &Formula) -> Result<KnowledgeBase> {
    query_transform(kb, phi, false)
}

/// `Σ ∪ {Lφ ⊕ p, Lp}`: has a consistent stable expansion iff some consistent
/// stable expansion of `Σ` lacks `φ`.
pub fn cautious_to_expstar(kb: &KnowledgeBase, phi: &Formula) -> Result<KnowledgeBase> {
    query_transform(kb, phi, true)
}

/// Replaces `1` by a fresh atom `t` and `0` by `Lf` for a fresh `f`, and adds
/// the premise `t`. Nullary connectives leave the signature.
pub fn eliminate_constants(kb: &KnowledgeBase) -> Result<KnowledgeBase> {
    let mut fresh = FreshNames::new(kb.atoms());
    let t = Formula::atom(fresh.fresh("t"));
    let f = Formula::belief(Formula::atom(fresh.fresh("f")));
    fn replace(g: &Formula, t: &Formula, f: &Formula) -> Formula {
        match g {
            Formula::Atom(_) => g.clone(),
            Formula::Belief(inner) => Formula::belief(replace(inner, t, f)),
            Formula::Apply(c, args) if args.is_empty() => {
                if c.table().get(0) {
                    t.clone()
                } else {
                    f.clone()
                }
            }
            Formula::Apply(c, args) => {
                Formula::apply(c, args.iter().map(|a| replace(a, t, f)).collect())
            }
        }
    }
    let mut premises: Vec<Formula> = kb.premises().iter().map(|p| replace(p, &t, &f)).collect();
    premises.push(t.clone());
    let signature = Signature::new(
        kb.signature()
            .connectives()
            .filter(|c| c.arity() > 0)
            .cloned()
            .collect(),
    )?;
    let mut out = KnowledgeBase::new(signature, premises)?;
    if let Some(label) = kb.label() {
        out = out.with_label(label);
    }
    Ok(out)
}

/// Largest number of atoms the oracles enumerate.
pub const ORACLE_LIMIT: usize = 20;

/// Number of satisfying assignments over the atoms of a belief-free formula.
pub fn oracle_count_models(phi: &Formula) -> Result<u64> {
    if phi.contains_belief() {
        return Err(Error::BeliefNotAllowed);
    }
    let atoms: Vec<String> = phi.atoms().into_iter().collect();
    if atoms.len() > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            found: atoms.len(),
            limit: ORACLE_LIMIT,
        });
    }
    let mut count = 0;
    for mask in 0u32..1 << atoms.len() {
        let value = |a: &str| {
            let i = atoms.iter().position(|b| b == a).expect("known atom");
            mask >> i & 1 == 1
        };
        count += u64::from(phi.eval_with(&value));
    }
    Ok(count)
}

/// Evaluates `∃x ∀y ψ` by trying every assignment.
pub fn oracle_qbf2_valid(q: &Qbf2) -> Result<bool> {
    let n = q.exists.len() + q.forall.len();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            found: n,
            limit: ORACLE_LIMIT,
        });
    }
    let holds = |assignment: &dyn Fn(u32) -> bool| {
        q.terms
            .iter()
            .any(|t| t.iter().all(|&l| assignment(l.unsigned_abs()) == (l > 0)))
    };
    let (e, a) = (q.exists.len(), q.forall.len());
    Ok((0u32..1 << e).any(|xm| {
        (0u32..1 << a).all(|ym| {
            let value = |v: u32| {
                if let Some(i) = q.exists.iter().position(|&x| x == v) {
                    xm >> i & 1 == 1
                } else {
                    let j = q.forall.iter().position(|&y| y == v).expect("quantified");
                    ym >> j & 1 == 1
                }
            };
            holds(&value)
        })
    }))
}

/// Parameters of [`generate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Clone whose standard base becomes the signature.
    pub profile: CloneName,
    pub atoms: usize,
    pub premises: usize,
    pub seed: u64,
    /// Maximum connective nesting below a premise root.
    pub max_depth: usize,
    /// Maximum nesting of `L`; at most 2.
    pub max_belief_depth: usize,
    /// Bound on `|SF^L(Σ)|`; premises that would exceed it are redrawn
    /// without beliefs.
    pub max_l_subformulas: Option<usize>,
}

impl GenConfig {
    pub fn new(profile: CloneName, atoms: usize, premises: usize, seed: u64) -> Self {
        GenConfig {
            profile,
            atoms,
            premises,
            seed,
            max_depth: 3,
            max_belief_depth: 2,
            max_l_subformulas: None,
        }
    }
}

/// A reproducible random knowledge base over the standard base of `profile`.
pub fn gen_random(
    profile: CloneName,
    atoms: usize,
    premises: usize,
    seed: u64,
) -> Result<KnowledgeBase> {
    generate(&GenConfig::new(profile, atoms, premises, seed))
}

pub fn generate(config: &GenConfig) -> Result<KnowledgeBase> {
    if config.atoms == 0 {
        return Err(Error::InvalidInput(String::from(
            "at least one atom is needed",
        )));
    }
    let signature = Signature::builtin(config.profile.base())?;
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        atoms: (1..=config.atoms).map(|i| format!("p{i}")).collect(),
        constants: signature
            .connectives()
            .filter(|c| c.arity() == 0)
            .cloned()
            .map(alloc::sync::Arc::new)
            .collect(),
        gates: signature
            .connectives()
            .filter(|c| c.arity() > 0)
            .cloned()
            .map(alloc::sync::Arc::new)
            .collect(),
    };
    let belief_depth = config.max_belief_depth.min(2);
    let mut premises: Vec<Formula> = Vec::with_capacity(config.premises);
    for _ in 0..config.premises {
        let mut p = gen.formula(config.max_depth, belief_depth);
        if let Some(limit) = config.max_l_subformulas {
            let mut tries = 0;
            while sfl_all(premises.iter().chain([&p])).len() > limit {
                tries += 1;
                let depth = if tries < 8 { belief_depth } else { 0 };
                p = gen.formula(config.max_depth, depth);
            }
        }
        premises.push(p);
    }
    KnowledgeBase::new(signature, premises)
}

struct Generator {
    rng: ChaCha8Rng,
    atoms: Vec<String>,
    constants: Vec<alloc::sync::Arc<Connective>>,
    gates: Vec<alloc::sync::Arc<Connective>>,
}

impl Generator {
    fn leaf(&mut self, belief_depth: usize) -> Formula {
        if belief_depth > 0 && self.rng.random_bool(0.4) {
            let inner = self.formula(2, belief_depth - 1);
            return Formula::belief(inner);
        }
        if !self.constants.is_empty() && self.rng.random_bool(0.1) {
            let c = &self.constants[self.rng.random_range(0..self.constants.len())];
            return Formula::apply(c, Vec::new());
        }
        Formula::atom(self.atoms[self.rng.random_range(0..self.atoms.len())].clone())
    }

    fn formula(&mut self, depth: usize, belief_depth: usize) -> Formula {
        if depth == 0 || self.gates.is_empty() || self.rng.random_bool(0.35) {
            return self.leaf(belief_depth);
        }
        let c = self.gates[self.rng.random_range(0..self.gates.len())].clone();
        let args = (0..c.arity())
            .map(|_| self.formula(depth - 1, belief_depth))
            .collect();
        Formula::apply(&c, args)
    }
}
