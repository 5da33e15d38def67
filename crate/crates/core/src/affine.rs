//! Polynomial-time solving for affine knowledge bases.
//!
//! Beliefs are first made atomic (`Lφ` becomes `Ly` with `y ↔ φ` added), the
//! premises become a GF(2) system over plain-atom columns `x` and belief
//! columns `y`, and the full sets are read off a second elimination over the
//! belief columns.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::clones::CloneName;
use crate::error::{Error, Result};
use crate::formula::{Formula, FreshNames, KnowledgeBase};
use crate::fullset::{Kernel, Sign};
use crate::gf2::{self, BitRow, SolutionSpace};
use crate::reductions;

/// Free dimension up to which kernels are extracted by default.
pub const DEFAULT_EXTRACTION_LIMIT: usize = 12;

fn is_affine(kb: &KnowledgeBase) -> bool {
    kb.clone_name().is_subclone_of(CloneName::L)
}

/// A knowledge base whose beliefs all wrap atoms, with the correspondence
/// back to the original `L`-subformulae.
#[derive(Clone, Debug)]
pub struct Atomized {
    pub kb: KnowledgeBase,
    /// `Ly ↦ Lφ` for each introduced atom, and `Lp ↦ Lp` for the rest.
    pub origin: BTreeMap<Formula, Formula>,
}

/// Replaces every non-atomic belief `Lφ` by `Ly` for a fresh `y` and adds
/// `y ⊕ φ ⊕ 1`, innermost beliefs first. The output signature is the source
/// signature plus `xor` and `1`.
pub fn l_atomize(kb: &KnowledgeBase) -> Result<Atomized> {
    if !is_affine(kb) {
        return Err(Error::NotAffine);
    }
    let signature = kb.signature().with_builtins(&["xor", "1"]);
    let xor = signature.op("xor");
    let one = Formula::apply(&signature.op("1"), Vec::new());
    let mut state = AtomizeState {
        fresh: FreshNames::new(kb.atoms()),
        introduced: BTreeMap::new(),
        equations: Vec::new(),
        origin: BTreeMap::new(),
    };
    let mut premises: Vec<Formula> = kb.premises().iter().map(|p| state.rewrite(p)).collect();
    for (y, phi) in state.equations {
        let eq = Formula::apply(&xor, alloc::vec![Formula::atom(y), phi]);
        premises.push(Formula::apply(&xor, alloc::vec![eq, one.clone()]));
    }
    let mut atomized = KnowledgeBase::new(signature, premises)?;
    if let Some(label) = kb.label() {
        atomized = atomized.with_label(label);
    }
    Ok(Atomized {
        kb: atomized,
        origin: state.origin,
    })
}

struct AtomizeState {
    fresh: FreshNames,
    /// Rewritten argument ↦ introduced atom.
    introduced: BTreeMap<Formula, String>,
    equations: Vec<(String, Formula)>,
    origin: BTreeMap<Formula, Formula>,
}

impl AtomizeState {
    fn rewrite(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Atom(_) => f.clone(),
            Formula::Apply(c, args) => {
                Formula::apply(c, args.iter().map(|a| self.rewrite(a)).collect())
            }
            Formula::Belief(inner) => {
                let arg = self.rewrite(inner);
                let atom = match arg {
                    Formula::Atom(_) => arg,
                    _ => {
                        let y = match self.introduced.get(&arg) {
                            Some(y) => y.clone(),
                            None => {
                                let y = self.fresh.fresh("y");
                                self.introduced.insert(arg.clone(), y.clone());
                                self.equations.push((y.clone(), arg));
                                y
                            }
                        };
                        Formula::atom(y)
                    }
                };
                let belief = Formula::belief(atom);
                self.origin.insert(belief.clone(), f.clone());
                belief
            }
        }
    }
}

/// Premises of an `L`-atomic affine knowledge base as GF(2) rows.
///
/// Columns `0..n` are the plain atoms, `n..2n` their beliefs (same order)
/// and `2n` the right-hand side. A row states that the XOR of its columns
/// equals the right-hand side.
#[derive(Clone, Debug)]
pub struct System {
    pub atoms: Vec<String>,
    pub rows: Vec<BitRow>,
    /// Atoms `a` with `La` in the knowledge base.
    pub believed_atoms: BTreeSet<usize>,
}

impl System {
    pub fn n(&self) -> usize {
        self.atoms.len()
    }

    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn y(&self, i: usize) -> usize {
        self.n() + i
    }

    pub fn rhs(&self) -> usize {
        2 * self.n()
    }
}

/// One row per premise.
pub fn to_system(kb: &KnowledgeBase) -> Result<System> {
    let atoms: Vec<String> = kb.atoms().into_iter().collect();
    let index: BTreeMap<&str, usize> = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    let n = atoms.len();
    let mut believed_atoms = BTreeSet::new();
    let mut rows = Vec::with_capacity(kb.premises().len());
    for p in kb.premises() {
        let mut row = BitRow::zeros(2 * n + 1);
        // The premise holds iff its linear form is 1.
        let constant = linear_form(
            p,
            &mut |q| match q {
                Formula::Atom(a) => Ok(index[a.as_str()]),
                Formula::Belief(inner) => match inner.as_atom() {
                    Some(a) => {
                        let i = index[a];
                        believed_atoms.insert(i);
                        Ok(n + i)
                    }
                    None => Err(Error::NotAffine),
                },
                Formula::Apply(..) => unreachable!("quasi-atoms only"),
            },
            &mut row,
        )?;
        row.set(2 * n, !constant);
        rows.push(row);
    }
    Ok(System {
        atoms,
        rows,
        believed_atoms,
    })
}

/// XORs the columns of `f`'s linear form into `row` and returns its constant.
fn linear_form(
    f: &Formula,
    column: &mut dyn FnMut(&Formula) -> Result<usize>,
    row: &mut BitRow,
) -> Result<bool> {
    match f {
        Formula::Apply(c, args) => {
            let (mut constant, relevant) = c.table().linear_form().ok_or(Error::NotAffine)?;
            for i in relevant {
                constant ^= linear_form(&args[i], column, row)?;
            }
            Ok(constant)
        }
        _ => {
            row.flip(column(f)?);
            Ok(false)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineReport {
    pub inconsistent_expansion: bool,
    pub consistent_count: BigUint,
    /// Dimension of the solution space of the belief system; meaningful only
    /// when `consistent_count` is nonzero.
    pub free_dimension: usize,
    /// Beliefs every consistent full set signs not-believed, as original
    /// `L`-subformulae in canonical order.
    pub forced_not_believed: Vec<Formula>,
}

impl AffineReport {
    pub fn total(&self) -> BigUint {
        &self.consistent_count + u32::from(self.inconsistent_expansion)
    }
}

/// The reduced system together with what is needed to extract kernels.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub report: AffineReport,
    /// Solutions over the belief columns, when any.
    space: Option<SolutionSpace>,
    system: System,
    forced: BTreeSet<usize>,
    origin: BTreeMap<Formula, Formula>,
}

/// Runs the pipeline on an affine knowledge base.
pub fn analyze(kb: &KnowledgeBase) -> Result<Analysis> {
    let atomized = l_atomize(kb)?;
    let system = to_system(&atomized.kb)?;
    let n = system.n();
    let rhs = system.rhs();

    let mut rows = system.rows.clone();
    let pivots = gf2::reduce_rows(&mut rows, 0..n);
    let rank = pivots.len();
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();

    // Lemma 4: with every belief true, a contradictory pure row means the
    // inconsistent expansion exists.
    let all_believed = BitRow::from_ones(
        rows.first().map_or(rhs + 1, BitRow::len),
        system
            .believed_atoms
            .iter()
            .map(|&i| system.y(i))
            .chain([rhs]),
    );
    let inconsistent_expansion = rows[rank..].iter().any(|r| r.dot(&all_believed));

    // Atoms whose value is not fixed by the beliefs are never entailed in a
    // consistent expansion.
    let mut forced: BTreeSet<usize> = (0..n).filter(|i| !pivot_set.contains(i)).collect();
    for (k, &p) in pivots.iter().enumerate() {
        if rows[k].first_one_in(p + 1..n).is_some() {
            forced.insert(p);
        }
    }
    let forced: BTreeSet<usize> = forced
        .intersection(&system.believed_atoms)
        .copied()
        .collect();

    // T′: a solved row `x_p = g(y) + c` for a believed atom p becomes the
    // fixed-point equation `y_p = g(y) + c`; forced beliefs are 0.
    let mut belief_rows: Vec<BitRow> = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        if k < rank {
            let p = pivots[k];
            if !system.believed_atoms.contains(&p) || forced.contains(&p) {
                continue;
            }
            for i in 0..n {
                r.set(i, false);
            }
            r.flip(system.y(p));
        }
        for &i in &forced {
            r.set(system.y(i), false);
        }
        belief_rows.push(r);
    }
    let unknowns: Vec<usize> = system
        .believed_atoms
        .iter()
        .filter(|i| !forced.contains(i))
        .map(|&i| system.y(i))
        .collect();
    let space = gf2::solve(&mut belief_rows, &unknowns, rhs);
    let (consistent_count, free_dimension) = match &space {
        Some(s) => (BigUint::from(1u8) << s.dimension(), s.dimension()),
        None => (BigUint::default(), 0),
    };
    let mut forced_not_believed: Vec<Formula> = forced
        .iter()
        .map(|&i| atomized.origin[&Formula::belief(Formula::atom(system.atoms[i].clone()))].clone())
        .collect();
    forced_not_believed.sort();
    Ok(Analysis {
        report: AffineReport {
            inconsistent_expansion,
            consistent_count,
            free_dimension,
            forced_not_believed,
        },
        space,
        system,
        forced,
        origin: atomized.origin,
    })
}

impl Analysis {
    fn kernel_of(&self, y: &BitRow) -> Kernel {
        self.system
            .believed_atoms
            .iter()
            .map(|&i| {
                let belief = Formula::belief(Formula::atom(self.system.atoms[i].clone()));
                let value = !self.forced.contains(&i) && y.get(self.system.y(i));
                (self.origin[&belief].clone(), Sign::from_bool(value))
            })
            .collect()
    }

    fn inconsistent_kernel(&self) -> Kernel {
        self.origin
            .values()
            .map(|f| (f.clone(), Sign::Believed))
            .collect()
    }

    /// Some full kernel, consistent ones first.
    pub fn witness(&self) -> Option<Kernel> {
        match &self.space {
            Some(s) => Some(self.kernel_of(&s.particular)),
            None => self
                .report
                .inconsistent_expansion
                .then(|| self.inconsistent_kernel()),
        }
    }

    /// A full kernel with a consistent expansion.
    pub fn consistent_witness(&self) -> Option<Kernel> {
        self.space.as_ref().map(|s| self.kernel_of(&s.particular))
    }

    /// Every full kernel in canonical order, or `None` when the free
    /// dimension exceeds `limit`.
    pub fn kernels(&self, limit: usize) -> Option<Vec<Kernel>> {
        let mut out: Vec<Kernel> = match &self.space {
            Some(s) if s.dimension() > limit => return None,
            Some(s) => s.iter().map(|y| self.kernel_of(&y)).collect(),
            None => Vec::new(),
        };
        if self.report.inconsistent_expansion {
            out.push(self.inconsistent_kernel());
        }
        out.sort();
        out.dedup();
        Some(out)
    }
}

pub fn solve_affine(kb: &KnowledgeBase) -> Result<AffineReport> {
    Ok(analyze(kb)?.report)
}

/// `φ` holds in some stable expansion: `Σ ∪ {Lφ ⊕ p ⊕ 1, Lp}` (that is,
/// `p ↔ Lφ` with `p` believed) has an expansion.
pub fn brave_affine(kb: &KnowledgeBase, phi: &Formula) -> Result<bool> {
    let report = solve_affine(&reductions::brave_to_exp(kb, phi)?)?;
    Ok(report.total() > BigUint::default())
}

/// `φ` holds in every stable expansion: `Σ ∪ {Lφ ⊕ p, Lp}` (`p ↔ ¬Lφ` with
/// `p` believed) has no consistent expansion.
pub fn cautious_affine(kb: &KnowledgeBase, phi: &Formula) -> Result<bool> {
    let report = solve_affine(&reductions::cautious_to_expstar(kb, phi)?)?;
    Ok(report.consistent_count == BigUint::default())
}
