//! Σ-full sets (kernels of stable expansions): checking, enumeration, the
//! `⊨_L` membership test and the reasoning tasks built on them.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::Cell;
use core::fmt;
use core::ops::{ControlFlow, Range};

use crate::entailment::{Abstraction, Entailer, Literal, Prop, Strategy};
use crate::error::{Error, Result};
use crate::formula::{sfq, Formula, KnowledgeBase};

/// Default bound on `|SF^L(Σ)|` for enumeration.
pub const DEFAULT_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    NotBelieved,
    Believed,
}

impl Sign {
    pub fn from_bool(believed: bool) -> Self {
        if believed {
            Sign::Believed
        } else {
            Sign::NotBelieved
        }
    }

    pub fn is_believed(self) -> bool {
        self == Sign::Believed
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Believed => '+',
            Sign::NotBelieved => '-',
        }
    }
}

/// A sign for each `L`-subformula of a knowledge base. Keys are `Lφ`
/// formulae; iteration follows the canonical formula order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Kernel {
    signs: BTreeMap<Formula, Sign>,
}

impl Kernel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Signs `lf[i]` believed iff bit `lf.len() - 1 - i` of `mask` is set.
    pub fn from_mask(lf: &[Formula], mask: u64) -> Self {
        let k = lf.len();
        lf.iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), Sign::from_bool(mask >> (k - 1 - i) & 1 == 1)))
            .collect()
    }

    pub fn insert(&mut self, belief: Formula, sign: Sign) {
        debug_assert!(belief.as_belief().is_some());
        self.signs.insert(belief, sign);
    }

    pub fn sign(&self, belief: &Formula) -> Option<Sign> {
        self.signs.get(belief).copied()
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, Sign)> {
        self.signs.iter().map(|(f, s)| (f, *s))
    }

    pub fn all_believed(&self) -> bool {
        self.signs.values().all(|s| s.is_believed())
    }

    /// The comma-separated `Lφ=+` / `Lφ=-` text, as printed by [`fmt::Display`].
    pub fn to_text(&self) -> String {
        alloc::format!("{self}")
    }
}

impl FromIterator<(Formula, Sign)> for Kernel {
    fn from_iter<I: IntoIterator<Item = (Formula, Sign)>>(iter: I) -> Self {
        Kernel {
            signs: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (belief, sign)) in self.signs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{belief}={}", sign.symbol())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub strategy: Strategy,
    pub cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            strategy: Strategy::Search,
            cap: DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub candidates: u64,
    pub entailment_calls: u64,
}

/// A knowledge base prepared for kernel checking.
pub struct FullSets<'a> {
    kb: &'a KnowledgeBase,
    options: Options,
    lf: Vec<Formula>,
    lf_vars: Vec<u32>,
    /// Lowered `φ` for each `Lφ` in `lf`.
    bodies: Vec<Prop>,
    abs: Abstraction,
    entailer: Entailer,
    candidates: Cell<u64>,
}

impl<'a> FullSets<'a> {
    pub fn new(kb: &'a KnowledgeBase, options: Options) -> Result<Self> {
        let mut abs = Abstraction::new();
        let premises: Vec<Prop> = kb.premises().iter().map(|p| abs.lower(p)).collect();
        let num_vars = abs.len();
        let lf: Vec<Formula> = kb.sfl().into_iter().collect();
        let lf_vars = lf.iter().map(|f| abs.var(f)).collect();
        let bodies = lf
            .iter()
            .map(|f| abs.lower(f.as_belief().expect("L-subformula")))
            .collect();
        let entailer = Entailer::new(options.strategy, premises, num_vars)?;
        Ok(FullSets {
            kb,
            options,
            lf,
            lf_vars,
            bodies,
            abs,
            entailer,
            candidates: Cell::new(0),
        })
    }

    pub fn knowledge_base(&self) -> &KnowledgeBase {
        self.kb
    }

    /// `SF^L(Σ)` in canonical order.
    pub fn l_subformulae(&self) -> &[Formula] {
        &self.lf
    }

    pub fn stats(&self) -> Stats {
        Stats {
            candidates: self.candidates.get(),
            entailment_calls: self.entailer.calls(),
        }
    }

    /// Number of candidate kernels, after checking the enumeration cap.
    pub fn candidate_count(&self) -> Result<u64> {
        let k = self.lf.len();
        if k > self.options.cap || k >= 64 {
            return Err(Error::CapExceeded {
                found: k,
                cap: self.options.cap,
            });
        }
        Ok(1 << k)
    }

    fn assumptions(&self, kernel: &Kernel) -> Result<Vec<Literal>> {
        if kernel.len() != self.lf.len() {
            return Err(Error::KernelNotTotal);
        }
        self.lf
            .iter()
            .zip(&self.lf_vars)
            .map(|(f, &var)| {
                let sign = kernel.sign(f).ok_or(Error::KernelNotTotal)?;
                Ok(Literal::new(var, sign.is_believed()))
            })
            .collect()
    }

    fn mask_assumptions(&self, mask: u64) -> Vec<Literal> {
        let k = self.lf.len();
        self.lf_vars
            .iter()
            .enumerate()
            .map(|(i, &var)| Literal::new(var, mask >> (k - 1 - i) & 1 == 1))
            .collect()
    }

    fn check(&self, assumptions: &[Literal]) -> Result<bool> {
        self.candidates.set(self.candidates.get() + 1);
        for (body, lit) in self.bodies.iter().zip(assumptions) {
            if self.entailer.entails(assumptions, body)? != lit.value {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `kernel` is Σ-full: each `Lφ` is believed exactly when
    /// `Σ ∪ Λ ⊨ φ`.
    pub fn is_full(&self, kernel: &Kernel) -> Result<bool> {
        let assumptions = self.assumptions(kernel)?;
        self.check(&assumptions)
    }

    /// Calls `f` on each full kernel whose mask lies in `masks`, in order.
    pub fn for_each_in<B>(
        &self,
        masks: Range<u64>,
        mut f: impl FnMut(u64, &[Literal]) -> Result<ControlFlow<B>>,
    ) -> Result<Option<B>> {
        let total = self.candidate_count()?;
        for mask in masks.start..masks.end.min(total) {
            let assumptions = self.mask_assumptions(mask);
            if self.check(&assumptions)? {
                if let ControlFlow::Break(b) = f(mask, &assumptions)? {
                    return Ok(Some(b));
                }
            }
        }
        Ok(None)
    }

    /// Full kernels whose masks lie in `masks`, in canonical order. The mask
    /// of a kernel has the first `L`-subformula as its most significant bit.
    pub fn kernels_in(&self, masks: Range<u64>) -> Result<Vec<Kernel>> {
        let mut out = Vec::new();
        self.for_each_in::<()>(masks, |mask, _| {
            out.push(Kernel::from_mask(&self.lf, mask));
            Ok(ControlFlow::Continue(()))
        })?;
        Ok(out)
    }

    pub fn kernels(&self) -> Result<Vec<Kernel>> {
        self.kernels_in(0..self.candidate_count()?)
    }

    pub fn count(&self) -> Result<u64> {
        let mut n = 0;
        self.for_each_in::<()>(0..u64::MAX, |_, _| {
            n += 1;
            Ok(ControlFlow::Continue(()))
        })?;
        Ok(n)
    }

    /// Some stable expansion exists.
    pub fn exp(&self) -> Result<Option<Kernel>> {
        self.for_each_in(0..u64::MAX, |mask, _| {
            Ok(ControlFlow::Break(Kernel::from_mask(&self.lf, mask)))
        })
    }

    /// Some consistent stable expansion exists.
    pub fn exp_consistent(&self) -> Result<Option<Kernel>> {
        self.for_each_in(0..u64::MAX, |mask, assumptions| {
            Ok(if self.entailer.consistent(assumptions)? {
                ControlFlow::Break(Kernel::from_mask(&self.lf, mask))
            } else {
                ControlFlow::Continue(())
            })
        })
    }

    /// Whether `Σ ∪ Λ` is consistent.
    pub fn is_consistent(&self, kernel: &Kernel) -> Result<bool> {
        let assumptions = self.assumptions(kernel)?;
        self.entailer.consistent(&assumptions)
    }

    /// Whether the inconsistent expansion exists, i.e. `Σ ∪ SF^L(Σ)` is
    /// inconsistent.
    pub fn has_inconsistent_expansion(&self) -> Result<bool> {
        let all = self.mask_assumptions(u64::MAX >> (64 - self.lf.len().max(1)));
        let all: Vec<Literal> = all.into_iter().map(|l| Literal::new(l.var, true)).collect();
        Ok(!self.entailer.consistent(&all)?)
    }

    /// A kernel in which `φ` holds, if any.
    pub fn brave(&self, phi: &Formula) -> Result<Option<Kernel>> {
        self.kb.check(phi)?;
        self.for_each_in(0..u64::MAX, |mask, assumptions| {
            Ok(if self.decide(assumptions, phi, &mut BTreeMap::new())? {
                ControlFlow::Break(Kernel::from_mask(&self.lf, mask))
            } else {
                ControlFlow::Continue(())
            })
        })
    }

    /// A kernel in which `φ` fails, if any; `φ` is cautiously entailed iff
    /// this is `None`.
    pub fn cautious_counterexample(&self, phi: &Formula) -> Result<Option<Kernel>> {
        self.kb.check(phi)?;
        self.for_each_in(0..u64::MAX, |mask, assumptions| {
            Ok(if self.decide(assumptions, phi, &mut BTreeMap::new())? {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(Kernel::from_mask(&self.lf, mask))
            })
        })
    }

    pub fn cautious(&self, phi: &Formula) -> Result<bool> {
        Ok(self.cautious_counterexample(phi)?.is_none())
    }

    /// `Σ ∪ Λ ⊨_L φ`: whether `φ` belongs to the expansion of the full kernel `Λ`.
    pub fn models_l(&self, kernel: &Kernel, phi: &Formula) -> Result<bool> {
        let assumptions = self.assumptions(kernel)?;
        if !self.check(&assumptions)? {
            return Err(Error::KernelNotFull);
        }
        self.decide(&assumptions, phi, &mut BTreeMap::new())
    }

    /// Decides `φ` under the kernel literals: `L`-formulae outside the kernel
    /// are settled recursively on their argument and added as literals.
    fn decide(
        &self,
        kernel: &[Literal],
        phi: &Formula,
        memo: &mut BTreeMap<Formula, bool>,
    ) -> Result<bool> {
        let mut abs = self.abs.clone();
        let mut assumptions = kernel.to_vec();
        for q in sfq(phi) {
            let Some(chi) = q.as_belief() else { continue };
            if self
                .abs
                .lookup(&q)
                .is_some_and(|v| self.lf_vars.contains(&v))
            {
                continue;
            }
            let value = match memo.get(chi) {
                Some(&v) => v,
                None => {
                    let v = self.decide(kernel, chi, memo)?;
                    memo.insert(chi.clone(), v);
                    v
                }
            };
            assumptions.push(Literal::new(abs.var(&q), value));
        }
        let target = abs.lower(phi);
        self.entailer.entails(&assumptions, &target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Signature;
    use crate::syntax::{parse_formula, parse_kb};

    fn kb(text: &str) -> KnowledgeBase {
        parse_kb(text).unwrap()
    }

    fn formula(kb: &KnowledgeBase, text: &str) -> Formula {
        parse_formula(text, kb.signature()).unwrap()
    }

    fn lp(sign: Sign) -> Kernel {
        let sig = Signature::builtin(&[]).unwrap();
        [(parse_formula("Lp", &sig).unwrap(), sign)]
            .into_iter()
            .collect()
    }

    fn each_strategy(kb: &KnowledgeBase, f: impl Fn(&FullSets)) {
        for strategy in [Strategy::BruteForce, Strategy::Search] {
            f(&FullSets::new(
                kb,
                Options {
                    strategy,
                    cap: DEFAULT_CAP,
                },
            )
            .unwrap());
        }
    }

    // `p ^ Lp ^ 1` is p ↔ Lp: believing p makes it true.
    const SELF_SUPPORT: &str = "sig: xor,1\np ^ Lp ^ 1\n";

    #[test]
    fn is_full_examples() {
        each_strategy(&kb(SELF_SUPPORT), |fs| {
            assert!(fs.is_full(&lp(Sign::Believed)).unwrap());
            assert!(fs.is_full(&lp(Sign::NotBelieved)).unwrap());
        });
        each_strategy(&kb("sig:\nLp\n"), |fs| {
            assert!(!fs.is_full(&lp(Sign::Believed)).unwrap());
            assert!(!fs.is_full(&lp(Sign::NotBelieved)).unwrap());
        });
    }

    #[test]
    fn partial_kernel_is_rejected() {
        let k = kb(SELF_SUPPORT);
        let fs = FullSets::new(&k, Options::default()).unwrap();
        assert!(matches!(
            fs.is_full(&Kernel::new()),
            Err(Error::KernelNotTotal)
        ));
    }

    #[test]
    fn enumeration_examples() {
        each_strategy(&kb("sig:\n"), |fs| {
            assert_eq!(fs.kernels().unwrap(), [Kernel::new()]);
            assert_eq!(fs.count().unwrap(), 1);
        });
        each_strategy(&kb("sig:\nLp\n"), |fs| {
            assert!(fs.kernels().unwrap().is_empty());
            assert!(fs.exp().unwrap().is_none());
        });
        each_strategy(&kb(SELF_SUPPORT), |fs| {
            assert_eq!(
                fs.kernels().unwrap(),
                [lp(Sign::NotBelieved), lp(Sign::Believed)]
            );
            assert!(fs.exp_consistent().unwrap().is_some());
        });
        // p ⊕ Lp: believing p refutes it and vice versa.
        each_strategy(&kb("sig: xor\np ^ Lp\n"), |fs| {
            assert_eq!(fs.count().unwrap(), 0)
        });
    }

    #[test]
    fn inconsistent_premises_have_only_the_inconsistent_expansion() {
        each_strategy(&kb("sig: xor,1\np\np ^ 1\n"), |fs| {
            assert_eq!(fs.count().unwrap(), 1);
            assert!(fs.exp().unwrap().is_some());
            assert!(fs.exp_consistent().unwrap().is_none());
            assert!(fs.has_inconsistent_expansion().unwrap());
        });
    }

    #[test]
    fn models_l_examples() {
        let k = kb(SELF_SUPPORT);
        each_strategy(&k, |fs| {
            assert!(fs.models_l(&lp(Sign::Believed), &formula(&k, "p")).unwrap());
            assert!(!fs
                .models_l(&lp(Sign::NotBelieved), &formula(&k, "Lp"))
                .unwrap());
        });
        let empty = kb("sig:\n");
        each_strategy(&empty, |fs| {
            assert!(!fs
                .models_l(&Kernel::new(), &formula(&empty, "LLq"))
                .unwrap());
        });
        let neg = kb("sig: not\n");
        each_strategy(&neg, |fs| {
            // q is not believed, so ¬Lq is.
            assert!(fs.models_l(&Kernel::new(), &formula(&neg, "~Lq")).unwrap());
            assert!(fs.models_l(&Kernel::new(), &formula(&neg, "L~Lq")).unwrap());
        });
    }

    #[test]
    fn models_l_requires_full_kernel() {
        let k = kb("sig:\nLp\n");
        let fs = FullSets::new(&k, Options::default()).unwrap();
        assert!(matches!(
            fs.models_l(&lp(Sign::Believed), &formula(&k, "p")),
            Err(Error::KernelNotFull)
        ));
    }

    #[test]
    fn brave_and_cautious_examples() {
        let k = kb(SELF_SUPPORT);
        each_strategy(&k, |fs| {
            assert_eq!(
                fs.brave(&formula(&k, "p")).unwrap(),
                Some(lp(Sign::Believed))
            );
            assert!(!fs.cautious(&formula(&k, "p")).unwrap());
        });
        let none = kb("sig:\nLp\n");
        each_strategy(&none, |fs| {
            assert!(fs.brave(&formula(&none, "p")).unwrap().is_none());
            assert!(fs.cautious(&formula(&none, "p")).unwrap());
        });
        let empty = kb("sig: 1\n");
        each_strategy(&empty, |fs| {
            assert!(fs.brave(&formula(&empty, "1")).unwrap().is_some());
            assert!(fs.cautious(&formula(&empty, "1")).unwrap());
        });
    }

    #[test]
    fn stability_of_full_kernels() {
        let k = kb("sig: or,not\nLp | q\n~Lq | L(p | Lq)\n");
        each_strategy(&k, |fs| {
            for kernel in fs.kernels().unwrap() {
                for (belief, sign) in kernel.iter() {
                    assert_eq!(fs.models_l(&kernel, belief).unwrap(), sign.is_believed());
                }
            }
        });
    }

    #[test]
    fn cap_is_enforced() {
        let k = kb("sig: and\nLa & Lb & Lc\n");
        let fs = FullSets::new(
            &k,
            Options {
                strategy: Strategy::Search,
                cap: 2,
            },
        )
        .unwrap();
        assert!(matches!(
            fs.count(),
            Err(Error::CapExceeded { found: 3, cap: 2 })
        ));
    }

    #[test]
    fn kernel_text() {
        let k = kb("sig: or\nLp | L(a | b)\n");
        let fs = FullSets::new(&k, Options::default()).unwrap();
        let kernel = Kernel::from_mask(fs.l_subformulae(), 0b01);
        assert_eq!(kernel.to_text(), "Lp=-,L(a | b)=+");
    }
}
