//! Autoepistemic formulae over a declared signature of connectives, and the
//! structural operations on them (subformula sets, substitution).

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::clones::{classify_with_constants, CloneName, TruthTable};
use crate::error::{Error, Result};

/// Names of the built-in connectives accepted in a signature header.
pub const BUILTIN_NAMES: [&str; 7] = ["and", "or", "not", "xor", "0", "1", "id"];

/// How a connective is written in formula text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notation {
    /// Binary infix operator with its binding strength (larger binds tighter).
    Infix(&'static str, u8),
    Prefix(&'static str),
    Constant(&'static str),
    /// `name(arg, …)`.
    Call,
}

/// A named Boolean function.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Connective {
    name: String,
    table: TruthTable,
}

impl Connective {
    /// A user-declared connective. Names follow the atom syntax and may not
    /// shadow a built-in.
    pub fn new(name: &str, table: TruthTable) -> Result<Self> {
        if BUILTIN_NAMES.contains(&name) {
            return Err(Error::BadDefinition(alloc::format!(
                "'{name}' is a built-in connective"
            )));
        }
        if !is_identifier(name) {
            return Err(Error::BadDefinition(alloc::format!(
                "invalid connective name '{name}'"
            )));
        }
        Ok(Connective {
            name: name.to_string(),
            table,
        })
    }

    /// Looks up a built-in by name or by its operator symbol.
    pub fn builtin(name: &str) -> Option<Self> {
        let (name, bits, arity): (&str, &str, usize) = match name {
            "and" | "&" => ("and", "0001", 2),
            "or" | "|" => ("or", "0111", 2),
            "xor" | "^" => ("xor", "0110", 2),
            "not" | "~" => ("not", "10", 1),
            "id" => ("id", "01", 1),
            "0" => ("0", "0", 0),
            "1" => ("1", "1", 0),
            _ => return None,
        };
        Some(Connective {
            name: name.to_string(),
            table: TruthTable::from_bit_str(arity, bits).expect("valid built-in table"),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn arity(&self) -> usize {
        self.table.arity()
    }

    pub fn is_builtin(&self) -> bool {
        BUILTIN_NAMES.contains(&self.name.as_str())
    }

    pub fn notation(&self) -> Notation {
        match self.name.as_str() {
            "or" => Notation::Infix("|", 1),
            "xor" => Notation::Infix("^", 2),
            "and" => Notation::Infix("&", 3),
            "not" => Notation::Prefix("~"),
            "0" => Notation::Constant("0"),
            "1" => Notation::Constant("1"),
            _ => Notation::Call,
        }
    }

    /// The symbol used in error messages and operator syntax.
    pub fn symbol(&self) -> &str {
        match self.notation() {
            Notation::Infix(s, _) | Notation::Prefix(s) | Notation::Constant(s) => s,
            Notation::Call => &self.name,
        }
    }
}

impl fmt::Debug for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}:{}", self.name, self.arity(), self.table)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

/// The finite set `B` of connectives a knowledge base may use.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    connectives: Vec<Arc<Connective>>,
}

impl Signature {
    pub fn new(connectives: Vec<Connective>) -> Result<Self> {
        let mut sig = Signature::default();
        for c in connectives {
            if sig.get(c.name()).is_some() {
                return Err(Error::BadDefinition(alloc::format!(
                    "connective '{}' declared twice",
                    c.name()
                )));
            }
            sig.connectives.push(Arc::new(c));
        }
        Ok(sig)
    }

    /// A signature made of built-in connectives (names or symbols).
    pub fn builtin(names: &[&str]) -> Result<Self> {
        let connectives = names
            .iter()
            .map(|n| {
                Connective::builtin(n)
                    .ok_or_else(|| Error::BadDefinition(alloc::format!("unknown connective '{n}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(connectives)
    }

    pub fn connectives(&self) -> impl Iterator<Item = &Connective> + Clone {
        self.connectives.iter().map(|c| &**c)
    }

    pub fn len(&self) -> usize {
        self.connectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }

    /// Finds a connective by name, or by operator symbol for built-ins.
    pub fn get(&self, name: &str) -> Option<&Arc<Connective>> {
        let canonical = Connective::builtin(name);
        let name = canonical.as_ref().map_or(name, |c| c.name());
        self.connectives.iter().find(|c| c.name() == name)
    }

    pub fn contains(&self, connective: &Connective) -> bool {
        self.get(connective.name())
            .is_some_and(|c| c.table() == connective.table())
    }

    /// Adds the named built-ins that are not yet present.
    pub fn with_builtins(&self, names: &[&str]) -> Self {
        let mut sig = self.clone();
        for n in names {
            let c = Connective::builtin(n).expect("built-in name");
            if sig.get(c.name()).is_none() {
                sig.connectives.push(Arc::new(c));
            }
        }
        sig
    }

    /// Built-in connective of this signature, panicking if absent.
    pub(crate) fn op(&self, name: &str) -> Arc<Connective> {
        self.get(name)
            .cloned()
            .unwrap_or_else(|| panic!("signature lacks '{name}'"))
    }

    pub fn clone_name(&self) -> CloneName {
        classify_with_constants(self)
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.connectives.iter()).finish()
    }
}

/// An autoepistemic formula: `p | f(φ, …, φ) | Lφ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    Apply(Arc<Connective>, Vec<Formula>),
    Belief(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn belief(inner: Formula) -> Self {
        Formula::Belief(Box::new(inner))
    }

    /// Applies a connective; panics when the argument count does not match its arity.
    pub fn apply(connective: &Arc<Connective>, args: Vec<Formula>) -> Self {
        assert_eq!(
            connective.arity(),
            args.len(),
            "arity mismatch for '{}'",
            connective.name()
        );
        Formula::Apply(connective.clone(), args)
    }

    pub fn try_apply(connective: &Arc<Connective>, args: Vec<Formula>) -> Result<Self> {
        if connective.arity() != args.len() {
            return Err(Error::ArityMismatch {
                name: connective.symbol().to_string(),
                expected: connective.arity(),
                found: args.len(),
            });
        }
        Ok(Formula::Apply(connective.clone(), args))
    }

    /// Atoms and `L`-prefixed formulae.
    pub fn is_quasi_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Belief(_))
    }

    pub fn as_belief(&self) -> Option<&Formula> {
        match self {
            Formula::Belief(inner) => Some(inner),
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Formula::Atom(name) => Some(name),
            _ => None,
        }
    }

    pub fn contains_belief(&self) -> bool {
        match self {
            Formula::Atom(_) => false,
            Formula::Apply(_, args) => args.iter().any(Formula::contains_belief),
            Formula::Belief(_) => true,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Apply(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
            Formula::Belief(inner) => 1 + inner.size(),
        }
    }

    /// Maximum nesting of `L`.
    pub fn belief_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Apply(_, args) => args.iter().map(Formula::belief_depth).max().unwrap_or(0),
            Formula::Belief(inner) => 1 + inner.belief_depth(),
        }
    }

    /// All atom names, including those under `L`.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            Formula::Apply(_, args) => args.iter().for_each(|a| a.collect_atoms(out)),
            Formula::Belief(inner) => inner.collect_atoms(out),
        }
    }

    /// All connectives used, including those under `L`.
    pub fn connectives(&self) -> BTreeSet<Arc<Connective>> {
        let mut out = BTreeSet::new();
        self.collect_connectives(&mut out);
        out
    }

    fn collect_connectives(&self, out: &mut BTreeSet<Arc<Connective>>) {
        match self {
            Formula::Atom(_) => {}
            Formula::Apply(c, args) => {
                out.insert(c.clone());
                args.iter().for_each(|a| a.collect_connectives(out));
            }
            Formula::Belief(inner) => inner.collect_connectives(out),
        }
    }

    /// Classical value, with every maximal quasi-atomic subformula valued by `quasi`.
    pub fn eval(&self, quasi: &mut dyn FnMut(&Formula) -> bool) -> bool {
        match self {
            Formula::Atom(_) | Formula::Belief(_) => quasi(self),
            Formula::Apply(c, args) => {
                let mut row = 0usize;
                for a in args {
                    row = row << 1 | a.eval(quasi) as usize;
                }
                c.table().get(row)
            }
        }
    }

    /// Classical value of a formula whose quasi-atoms are all atoms.
    pub fn eval_with(&self, atom: &dyn Fn(&str) -> bool) -> bool {
        self.eval(&mut |q| match q {
            Formula::Atom(name) => atom(name),
            _ => panic!("belief operator in propositional evaluation"),
        })
    }

    fn children(&self) -> &[Formula] {
        match self {
            Formula::Atom(_) => &[],
            Formula::Apply(_, args) => args,
            Formula::Belief(inner) => core::slice::from_ref(&**inner),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `SF(φ)`: every subformula, `φ` included.
pub fn sf(formula: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    collect_sf(formula, &mut out);
    out
}

fn collect_sf(formula: &Formula, out: &mut BTreeSet<Formula>) {
    if out.insert(formula.clone()) {
        formula.children().iter().for_each(|c| collect_sf(c, out));
    }
}

/// `SF^L(φ)`: the `L`-prefixed subformulae.
pub fn sfl(formula: &Formula) -> BTreeSet<Formula> {
    sfl_all(core::iter::once(formula))
}

/// `SF^L` extended to a set of formulae.
pub fn sfl_all<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for f in formulas {
        collect_sfl(f, &mut out);
    }
    out
}

fn collect_sfl(formula: &Formula, out: &mut BTreeSet<Formula>) {
    match formula {
        Formula::Atom(_) => {}
        Formula::Apply(_, args) => args.iter().for_each(|a| collect_sfl(a, out)),
        Formula::Belief(inner) => {
            if out.insert(formula.clone()) {
                collect_sfl(inner, out);
            }
        }
    }
}

/// `SF^q(φ)`: quasi-atomic subformulae not below another quasi-atomic one.
pub fn sfq(formula: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    collect_sfq(formula, &mut out);
    out
}

pub(crate) fn collect_sfq(formula: &Formula, out: &mut BTreeSet<Formula>) {
    match formula {
        Formula::Apply(_, args) => args.iter().for_each(|a| collect_sfq(a, out)),
        _ => {
            out.insert(formula.clone());
        }
    }
}

/// Simultaneous replacement of the outermost occurrences of the keys.
/// Replacement images are not rescanned.
pub fn substitute(formula: &Formula, map: &BTreeMap<Formula, Formula>) -> Formula {
    if map.is_empty() {
        return formula.clone();
    }
    if let Some(image) = map.get(formula) {
        return image.clone();
    }
    match formula {
        Formula::Atom(_) => formula.clone(),
        Formula::Apply(c, args) => {
            Formula::Apply(c.clone(), args.iter().map(|a| substitute(a, map)).collect())
        }
        Formula::Belief(inner) => Formula::belief(substitute(inner, map)),
    }
}

/// A knowledge base `Σ`: premises over a declared signature.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KnowledgeBase {
    signature: Signature,
    premises: Vec<Formula>,
    label: Option<String>,
}

impl KnowledgeBase {
    /// Checks every premise against the signature.
    pub fn new(signature: Signature, premises: Vec<Formula>) -> Result<Self> {
        for p in &premises {
            check_formula(&signature, p)?;
        }
        Ok(KnowledgeBase {
            signature,
            premises,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn premises(&self) -> &[Formula] {
        &self.premises
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `SF^L(Σ)`, sorted.
    pub fn sfl(&self) -> BTreeSet<Formula> {
        sfl_all(&self.premises)
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.premises.iter().for_each(|p| p.collect_atoms(&mut out));
        out
    }

    pub fn clone_name(&self) -> CloneName {
        self.signature.clone_name()
    }

    /// Checks that `formula` only uses connectives of this knowledge base.
    pub fn check(&self, formula: &Formula) -> Result<()> {
        check_formula(&self.signature, formula)
    }

    /// The same premises plus `extra`, over `signature` (which must cover both).
    pub fn extended(&self, signature: Signature, extra: Vec<Formula>) -> Result<Self> {
        let mut premises = self.premises.clone();
        premises.extend(extra);
        let mut kb = KnowledgeBase::new(signature, premises)?;
        kb.label = self.label.clone();
        Ok(kb)
    }
}

fn check_formula(signature: &Signature, formula: &Formula) -> Result<()> {
    match formula {
        Formula::Atom(name) => {
            if is_identifier(name) {
                Ok(())
            } else {
                Err(Error::InvalidInput(alloc::format!(
                    "invalid atom name '{name}'"
                )))
            }
        }
        Formula::Apply(c, args) => {
            if !signature.contains(c) {
                return Err(Error::NotInSignature(c.symbol().to_string()));
            }
            if c.arity() != args.len() {
                return Err(Error::ArityMismatch {
                    name: c.symbol().to_string(),
                    expected: c.arity(),
                    found: args.len(),
                });
            }
            args.iter().try_for_each(|a| check_formula(signature, a))
        }
        Formula::Belief(inner) => check_formula(signature, inner),
    }
}

/// Generates atom names that avoid a set of taken names.
#[derive(Clone, Debug, Default)]
pub struct FreshNames {
    taken: BTreeSet<String>,
}

impl FreshNames {
    pub fn new(taken: BTreeSet<String>) -> Self {
        FreshNames { taken }
    }

    /// `base` itself if free, otherwise `base_1`, `base_2`, ….
    pub fn fresh(&mut self, base: &str) -> String {
        let mut candidate = base.to_string();
        let mut n = 0usize;
        while self.taken.contains(&candidate) {
            n += 1;
            candidate = alloc::format!("{base}_{n}");
        }
        self.taken.insert(candidate.clone());
        candidate
    }
}
