//! Solver for conjunctive and unary signatures, where every formula is
//! equivalent to a conjunction of quasi-atomic literals.
//!
//! Such a knowledge base has at most one consistent stable expansion. Its
//! kernel is computed directly: `Lψ` is believed iff every literal of `ψ`
//! follows from the premise literals, with inner beliefs decided first.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::clones::CloneName;
use crate::error::{Error, Result};
use crate::formula::{Formula, KnowledgeBase};
use crate::fullset::{Kernel, Sign};

/// A formula as a constant or a conjunction of signed quasi-atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Norm {
    Const(bool),
    Conj(BTreeSet<(Formula, bool)>),
}

fn normal_form(f: &Formula) -> Result<Norm> {
    let Formula::Apply(c, args) = f else {
        return Ok(Norm::Conj(BTreeSet::from([(f.clone(), true)])));
    };
    let table = c.table();
    if let Some(form) = table.conjunctive_form() {
        let relevant = match form {
            Err(b) => return Ok(Norm::Const(b)),
            Ok(relevant) => relevant,
        };
        let mut conj = BTreeSet::new();
        for i in relevant {
            match normal_form(&args[i])? {
                Norm::Const(false) => return Ok(Norm::Const(false)),
                Norm::Const(true) => {}
                Norm::Conj(lits) => conj.extend(lits),
            }
        }
        return Ok(if conj.is_empty() {
            Norm::Const(true)
        } else {
            Norm::Conj(conj)
        });
    }
    match table.unary_form() {
        Some(Ok((i, negated))) => {
            let inner = normal_form(&args[i])?;
            if !negated {
                return Ok(inner);
            }
            match inner {
                Norm::Const(b) => Ok(Norm::Const(!b)),
                Norm::Conj(lits) if lits.len() == 1 => {
                    let (q, sign) = lits.into_iter().next().expect("one literal");
                    Ok(Norm::Conj(BTreeSet::from([(q, !sign)])))
                }
                Norm::Conj(_) => Err(Error::NotSimple),
            }
        }
        Some(Err(b)) => Ok(Norm::Const(b)),
        None => Err(Error::NotSimple),
    }
}

/// The premises as signed quasi-atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedQuasiAtoms {
    pub positives: BTreeSet<Formula>,
    pub negatives: BTreeSet<Formula>,
    /// A premise normalized to false, or some quasi-atom occurs with both signs.
    pub contradiction: bool,
}

impl SignedQuasiAtoms {
    fn holds(&self, q: &Formula, sign: bool) -> bool {
        if sign {
            self.positives.contains(q)
        } else {
            self.negatives.contains(q)
        }
    }
}

fn is_simple(kb: &KnowledgeBase) -> bool {
    let clone = kb.clone_name();
    clone.is_subclone_of(CloneName::E) || clone.is_subclone_of(CloneName::N)
}

pub fn normalize(kb: &KnowledgeBase) -> Result<SignedQuasiAtoms> {
    if !is_simple(kb) {
        return Err(Error::NotSimple);
    }
    let mut out = SignedQuasiAtoms::default();
    for p in kb.premises() {
        match normal_form(p)? {
            Norm::Const(b) => out.contradiction |= !b,
            Norm::Conj(lits) => {
                for (q, sign) in lits {
                    if sign {
                        out.positives.insert(q);
                    } else {
                        out.negatives.insert(q);
                    }
                }
            }
        }
    }
    out.contradiction |= out.positives.intersection(&out.negatives).next().is_some();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSolution {
    pub literals: SignedQuasiAtoms,
    /// The kernel of the consistent expansion, if there is one.
    pub consistent: Option<Kernel>,
    /// Whether the inconsistent expansion exists.
    pub inconsistent_expansion: bool,
    lf: Vec<Formula>,
}

pub fn solve_simple(kb: &KnowledgeBase) -> Result<SimpleSolution> {
    let literals = normalize(kb)?;
    let lf: Vec<Formula> = kb.sfl().into_iter().collect();

    // With every belief true, only negative belief literals can clash.
    let inconsistent_expansion =
        literals.contradiction || literals.negatives.iter().any(|q| q.as_belief().is_some());

    let consistent = if literals.contradiction {
        None
    } else {
        let mut verdicts = BTreeMap::new();
        let mut kernel = Kernel::new();
        for belief in &lf {
            let v = believed(&literals, belief, &mut verdicts)?;
            kernel.insert(belief.clone(), Sign::from_bool(v));
        }
        let agrees = lf.iter().all(|b| {
            let v = kernel.sign(b).expect("signed").is_believed();
            !literals.holds(b, !v)
        });
        agrees.then_some(kernel)
    };
    Ok(SimpleSolution {
        literals,
        consistent,
        inconsistent_expansion,
        lf,
    })
}

/// Whether `Lψ` is believed in the candidate kernel.
fn believed(
    literals: &SignedQuasiAtoms,
    belief: &Formula,
    verdicts: &mut BTreeMap<Formula, bool>,
) -> Result<bool> {
    if let Some(&v) = verdicts.get(belief) {
        return Ok(v);
    }
    let psi = belief.as_belief().expect("belief");
    let v = follows(literals, psi, verdicts)?;
    verdicts.insert(belief.clone(), v);
    Ok(v)
}

/// Whether the (consistent) premise literals plus the decided beliefs entail `φ`.
fn follows(
    literals: &SignedQuasiAtoms,
    phi: &Formula,
    verdicts: &mut BTreeMap<Formula, bool>,
) -> Result<bool> {
    match normal_form(phi)? {
        Norm::Const(b) => Ok(b),
        Norm::Conj(lits) => {
            for (q, sign) in lits {
                let holds = if q.as_belief().is_some() {
                    believed(literals, &q, verdicts)? == sign
                } else {
                    literals.holds(&q, sign)
                };
                if !holds {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

impl SimpleSolution {
    pub fn count(&self) -> u64 {
        u64::from(self.consistent.is_some()) + u64::from(self.inconsistent_expansion)
    }

    fn inconsistent_kernel(&self) -> Kernel {
        self.lf
            .iter()
            .map(|f| (f.clone(), Sign::Believed))
            .collect()
    }

    /// Full kernels in canonical order.
    pub fn kernels(&self) -> Vec<Kernel> {
        let mut out: Vec<Kernel> = self.consistent.iter().cloned().collect();
        if self.inconsistent_expansion {
            out.push(self.inconsistent_kernel());
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn exp(&self) -> Option<Kernel> {
        self.kernels().into_iter().next()
    }

    pub fn exp_consistent(&self) -> Option<Kernel> {
        self.consistent.clone()
    }

    /// `φ` in the consistent expansion, if that exists.
    fn in_consistent(&self, kernel: &Kernel, phi: &Formula) -> Result<bool> {
        let mut verdicts: BTreeMap<Formula, bool> = kernel
            .iter()
            .map(|(f, s)| (f.clone(), s.is_believed()))
            .collect();
        follows(&self.literals, phi, &mut verdicts)
    }

    /// A kernel whose expansion contains `φ`.
    pub fn brave(&self, phi: &Formula) -> Result<Option<Kernel>> {
        for k in self.kernels() {
            if Some(&k) != self.consistent.as_ref() || self.in_consistent(&k, phi)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// A kernel whose expansion lacks `φ`; `φ` is cautiously entailed iff none.
    pub fn cautious_counterexample(&self, phi: &Formula) -> Result<Option<Kernel>> {
        match &self.consistent {
            Some(k) if !self.in_consistent(k, phi)? => Ok(Some(k.clone())),
            _ => Ok(None),
        }
    }

    pub fn cautious(&self, phi: &Formula) -> Result<bool> {
        Ok(self.cautious_counterexample(phi)?.is_none())
    }
}
