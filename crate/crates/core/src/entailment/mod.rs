//! Propositional entailment `Γ ⊨ φ` where `L`-prefixed subformulae are
//! treated as fresh atoms.
//!
//! Formulae are first lowered to [`Prop`] circuits over variable indices by an
//! [`Abstraction`]; an [`Entailer`] then answers entailment and consistency
//! queries under extra unit assumptions with one of four [`Strategy`]s.
//! Reasoning always uses full two-valued semantics, whatever the signature.

mod fragment;
mod search;

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cell::Cell;
use core::fmt;

use crate::clones::CloneName;
use crate::error::{Error, Result};
use crate::formula::{Connective, Formula};

/// Largest number of variables the brute-force strategy will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// A propositional circuit over abstracted variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Prop {
    Const(bool),
    Var(u32),
    Gate(Arc<Connective>, Vec<Prop>),
}

impl Prop {
    pub fn eval(&self, value: &dyn Fn(u32) -> bool) -> bool {
        match self {
            Prop::Const(b) => *b,
            Prop::Var(v) => value(*v),
            Prop::Gate(c, args) => {
                let row = args
                    .iter()
                    .fold(0usize, |row, a| row << 1 | a.eval(value) as usize);
                c.table().get(row)
            }
        }
    }

    /// One past the largest variable index, or 0.
    pub fn var_bound(&self) -> usize {
        match self {
            Prop::Const(_) => 0,
            Prop::Var(v) => *v as usize + 1,
            Prop::Gate(_, args) => args.iter().map(Prop::var_bound).max().unwrap_or(0),
        }
    }
}

/// Maps maximal quasi-atomic subformulae (atoms and `Lψ`) to variables.
/// Structurally equal quasi-atoms share a variable.
#[derive(Clone, Debug, Default)]
pub struct Abstraction {
    index: BTreeMap<Formula, u32>,
    quasi: Vec<Formula>,
}

impl Abstraction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Variable of a quasi-atomic formula, allocated on first use.
    pub fn var(&mut self, quasi: &Formula) -> u32 {
        debug_assert!(quasi.is_quasi_atomic());
        if let Some(&v) = self.index.get(quasi) {
            return v;
        }
        let v = self.quasi.len() as u32;
        self.index.insert(quasi.clone(), v);
        self.quasi.push(quasi.clone());
        v
    }

    pub fn lookup(&self, quasi: &Formula) -> Option<u32> {
        self.index.get(quasi).copied()
    }

    pub fn quasi_atom(&self, var: u32) -> &Formula {
        &self.quasi[var as usize]
    }

    pub fn len(&self) -> usize {
        self.quasi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quasi.is_empty()
    }

    pub fn lower(&mut self, formula: &Formula) -> Prop {
        match formula {
            Formula::Atom(_) | Formula::Belief(_) => Prop::Var(self.var(formula)),
            Formula::Apply(c, args) if args.is_empty() => Prop::Const(c.table().get(0)),
            Formula::Apply(c, args) => {
                Prop::Gate(c.clone(), args.iter().map(|a| self.lower(a)).collect())
            }
        }
    }
}

/// A unit assumption `var = value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: u32,
    pub value: bool,
}

impl Literal {
    pub fn new(var: u32, value: bool) -> Self {
        Literal { var, value }
    }
}

/// How entailment is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Enumerate every assignment (at most [`BRUTE_FORCE_LIMIT`] variables).
    BruteForce,
    /// Tseitin encoding plus backtracking search with unit propagation.
    Search,
    /// Implication between positive clauses; every gate must be disjunctive.
    Disjunctive,
    /// Row-span test over GF(2); every gate must be linear.
    Affine,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::BruteForce => "brute",
            Strategy::Search => "search",
            Strategy::Disjunctive => "disjunctive",
            Strategy::Affine => "affine",
        }
    }

    /// The specialised strategy for a clone, if there is one.
    pub fn specialized_for(clone: CloneName) -> Option<Strategy> {
        match clone {
            CloneName::V => Some(Strategy::Disjunctive),
            CloneName::L | CloneName::N | CloneName::I => Some(Strategy::Affine),
            _ => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Strategy::BruteForce),
            "search" => Ok(Strategy::Search),
            "disjunctive" => Ok(Strategy::Disjunctive),
            "affine" => Ok(Strategy::Affine),
            _ => Err(Error::InvalidInput(alloc::format!(
                "unknown strategy '{s}'"
            ))),
        }
    }
}

enum Prepared {
    Brute,
    Search(search::Cnf),
    Disjunctive(Vec<fragment::Disj>),
    Affine(Vec<fragment::Lin>),
}

/// A fixed premise set, prepared once and queried under varying assumptions.
pub struct Entailer {
    strategy: Strategy,
    premises: Vec<Prop>,
    num_vars: usize,
    prepared: Prepared,
    calls: Cell<u64>,
}

impl Entailer {
    /// `num_vars` must bound every variable of `premises`; queries may mention
    /// larger variables, which are then unconstrained by the premises.
    pub fn new(strategy: Strategy, premises: Vec<Prop>, num_vars: usize) -> Result<Self> {
        debug_assert!(premises.iter().all(|p| p.var_bound() <= num_vars));
        let prepared = match strategy {
            Strategy::BruteForce => Prepared::Brute,
            Strategy::Search => Prepared::Search(search::Cnf::from_premises(&premises, num_vars)),
            Strategy::Disjunctive => Prepared::Disjunctive(
                premises
                    .iter()
                    .map(fragment::Disj::of)
                    .collect::<Result<_>>()?,
            ),
            Strategy::Affine => Prepared::Affine(
                premises
                    .iter()
                    .map(fragment::Lin::of)
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(Entailer {
            strategy,
            premises,
            num_vars,
            prepared,
            calls: Cell::new(0),
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    /// Number of entailment/consistency queries answered so far.
    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    /// Whether the premises plus `assumptions` entail `target`.
    pub fn entails(&self, assumptions: &[Literal], target: &Prop) -> Result<bool> {
        self.calls.set(self.calls.get() + 1);
        match &self.prepared {
            Prepared::Brute => {
                let n = self.width(assumptions, Some(target));
                brute_force(n, &self.premises, assumptions, |value| target.eval(value))
            }
            Prepared::Search(cnf) => Ok(!cnf.satisfiable_with(assumptions, Some(target))),
            Prepared::Disjunctive(premises) => {
                fragment::disjunctive_entails(premises, assumptions, Some(target))
            }
            Prepared::Affine(premises) => {
                fragment::affine_entails(premises, assumptions, Some(target))
            }
        }
    }

    /// Whether the premises plus `assumptions` are satisfiable.
    pub fn consistent(&self, assumptions: &[Literal]) -> Result<bool> {
        self.calls.set(self.calls.get() + 1);
        match &self.prepared {
            Prepared::Brute => {
                let n = self.width(assumptions, None);
                brute_force(n, &self.premises, assumptions, |_| false).map(|e| !e)
            }
            Prepared::Search(cnf) => Ok(cnf.satisfiable_with(assumptions, None)),
            Prepared::Disjunctive(premises) => {
                fragment::disjunctive_entails(premises, assumptions, None).map(|e| !e)
            }
            Prepared::Affine(premises) => {
                fragment::affine_entails(premises, assumptions, None).map(|e| !e)
            }
        }
    }

    fn width(&self, assumptions: &[Literal], target: Option<&Prop>) -> usize {
        let a = assumptions
            .iter()
            .map(|l| l.var as usize + 1)
            .max()
            .unwrap_or(0);
        let t = target.map_or(0, Prop::var_bound);
        self.num_vars.max(a).max(t)
    }
}

/// True iff every assignment over `n` variables that satisfies `premises` and
/// `assumptions` also satisfies `target`.
fn brute_force(
    n: usize,
    premises: &[Prop],
    assumptions: &[Literal],
    target: impl Fn(&dyn Fn(u32) -> bool) -> bool,
) -> Result<bool> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            found: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    for mask in 0u32..1 << n {
        let value = |v: u32| mask >> v & 1 == 1;
        if assumptions.iter().any(|l| value(l.var) != l.value) {
            continue;
        }
        if premises.iter().all(|p| p.eval(&value)) && !target(&value) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn lower_all(gamma: &[Formula], phi: Option<&Formula>) -> (Vec<Prop>, Option<Prop>, usize) {
    let mut abs = Abstraction::new();
    let premises: Vec<Prop> = gamma.iter().map(|g| abs.lower(g)).collect();
    let num_vars = abs.len();
    let target = phi.map(|f| abs.lower(f));
    (premises, target, num_vars)
}

/// `Γ ⊨ φ` with `L`-formulae abstracted as atoms.
pub fn entails(gamma: &[Formula], phi: &Formula, strategy: Strategy) -> Result<bool> {
    let (premises, target, num_vars) = lower_all(gamma, Some(phi));
    Entailer::new(strategy, premises, num_vars)?.entails(&[], &target.expect("lowered"))
}

/// Whether `Γ` has a model, with `L`-formulae abstracted as atoms.
pub fn consistent(gamma: &[Formula], strategy: Strategy) -> Result<bool> {
    let (premises, _, num_vars) = lower_all(gamma, None);
    Entailer::new(strategy, premises, num_vars)?.consistent(&[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Signature;
    use crate::syntax::parse_formula;

    const ALL: [Strategy; 4] = [
        Strategy::BruteForce,
        Strategy::Search,
        Strategy::Disjunctive,
        Strategy::Affine,
    ];

    fn fs(texts: &[&str]) -> Vec<Formula> {
        let sig = Signature::builtin(&["and", "or", "not", "xor", "0", "1"]).unwrap();
        texts
            .iter()
            .map(|t| parse_formula(t, &sig).unwrap())
            .collect()
    }

    /// Runs every applicable strategy and checks they agree.
    fn decide(gamma: &[&str], phi: &str) -> bool {
        let g = fs(gamma);
        let phi = &fs(&[phi])[0];
        let answers: Vec<(Strategy, bool)> = ALL
            .iter()
            .filter_map(|&s| match entails(&g, phi, s) {
                Ok(b) => Some((s, b)),
                Err(Error::StrategyNotApplicable(_)) => None,
                Err(e) => panic!("{e}"),
            })
            .collect();
        assert!(answers.len() >= 2);
        assert!(answers.iter().all(|a| a.1 == answers[0].1), "{answers:?}");
        answers[0].1
    }

    fn is_consistent(gamma: &[&str]) -> bool {
        let g = fs(gamma);
        let answers: Vec<bool> = ALL.iter().filter_map(|&s| consistent(&g, s).ok()).collect();
        assert!(answers.iter().all(|&a| a == answers[0]));
        answers[0]
    }

    #[test]
    fn entailment_examples() {
        assert!(decide(&["p"], "p"));
        assert!(decide(&["Lp", "~Lp"], "q"));
        assert!(!decide(&["x | y"], "x"));
        assert!(decide(&["x | y", "~y"], "x"));
        assert!(decide(&["Lp ^ q", "Lp"], "~q"));
        assert!(decide(&[], "1"));
        assert!(!decide(&[], "0"));
    }

    #[test]
    fn consistency_examples() {
        assert!(!is_consistent(&["p", "~p"]));
        assert!(is_consistent(&[]));
        // x ⊕ y ⊕ 1 is true at x = y = 1.
        assert!(is_consistent(&["x ^ y ^ 1", "x", "y"]));
        assert!(!is_consistent(&["x ^ y", "x", "y"]));
        assert!(!is_consistent(&["0"]));
    }

    #[test]
    fn belief_formulae_are_opaque_atoms() {
        // Lp and p are unrelated for classical entailment.
        assert!(!decide(&["Lp"], "p"));
        assert!(!decide(&["p"], "Lp"));
        assert!(decide(&["L(p & q)"], "L(p & q)"));
        assert!(!decide(&["L(p & q)"], "L(q & p)"));
    }

    #[test]
    fn fragment_strategies_refuse_foreign_gates() {
        let g = fs(&["p & q"]);
        let phi = &fs(&["p"])[0];
        assert!(matches!(
            entails(&g, phi, Strategy::Disjunctive),
            Err(Error::StrategyNotApplicable(_))
        ));
        assert!(matches!(
            entails(&g, phi, Strategy::Affine),
            Err(Error::StrategyNotApplicable(_))
        ));
    }

    #[test]
    fn brute_force_limit() {
        let atoms: Vec<String> = (0..25).map(|i| alloc::format!("a{i}")).collect();
        let refs: Vec<&str> = atoms.iter().map(String::as_str).collect();
        let g = fs(&refs);
        let phi = &fs(&["a0"])[0];
        assert!(matches!(
            entails(&g, phi, Strategy::BruteForce),
            Err(Error::TooLarge { .. })
        ));
        assert!(entails(&g, phi, Strategy::Search).unwrap());
    }

    use alloc::string::String;
}
