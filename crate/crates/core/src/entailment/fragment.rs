//! Entailment for disjunctive and affine circuits via normal forms.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{Literal, Prop};
use crate::error::{Error, Result};
use crate::gf2::{reduce_rows, BitRow};

/// A constant or a disjunction of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Disj {
    Const(bool),
    Clause(BTreeSet<u32>),
}

impl Disj {
    pub(super) fn of(prop: &Prop) -> Result<Disj> {
        match prop {
            Prop::Const(b) => Ok(Disj::Const(*b)),
            Prop::Var(v) => Ok(Disj::Clause(BTreeSet::from([*v]))),
            Prop::Gate(c, args) => match c.table().disjunctive_form() {
                None => Err(Error::StrategyNotApplicable(
                    "disjunctive strategy needs disjunctive connectives",
                )),
                Some(Err(b)) => Ok(Disj::Const(b)),
                Some(Ok(relevant)) => {
                    let mut clause = BTreeSet::new();
                    for i in relevant {
                        match Disj::of(&args[i])? {
                            Disj::Const(true) => return Ok(Disj::Const(true)),
                            Disj::Const(false) => {}
                            Disj::Clause(vars) => clause.extend(vars),
                        }
                    }
                    Ok(if clause.is_empty() {
                        Disj::Const(false)
                    } else {
                        Disj::Clause(clause)
                    })
                }
            },
        }
    }

    /// The remaining variables under `assumptions`; `None` when satisfied.
    fn residual(&self, assumptions: &[Literal]) -> Option<BTreeSet<u32>> {
        match self {
            Disj::Const(true) => None,
            Disj::Const(false) => Some(BTreeSet::new()),
            Disj::Clause(vars) => {
                let mut rest = vars.clone();
                for a in assumptions {
                    if rest.contains(&a.var) {
                        if a.value {
                            return None;
                        }
                        rest.remove(&a.var);
                    }
                }
                Some(rest)
            }
        }
    }
}

/// Positive clauses entail a positive clause iff one of them is a subset of
/// it: setting everything outside the target true and the target false
/// satisfies every other clause. With no target, decides inconsistency.
pub(super) fn disjunctive_entails(
    premises: &[Disj],
    assumptions: &[Literal],
    target: Option<&Prop>,
) -> Result<bool> {
    let goal = match target {
        Some(t) => match Disj::of(t)?.residual(assumptions) {
            None => return Ok(true),
            Some(rest) => rest,
        },
        None => BTreeSet::new(),
    };
    Ok(premises
        .iter()
        .filter_map(|p| p.residual(assumptions))
        .any(|clause| clause.is_subset(&goal)))
}

/// `constant ⊕ ⨁ vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) struct Lin {
    vars: BTreeSet<u32>,
    constant: bool,
}

impl Lin {
    pub(super) fn of(prop: &Prop) -> Result<Lin> {
        match prop {
            Prop::Const(b) => Ok(Lin {
                vars: BTreeSet::new(),
                constant: *b,
            }),
            Prop::Var(v) => Ok(Lin {
                vars: BTreeSet::from([*v]),
                constant: false,
            }),
            Prop::Gate(c, args) => {
                let (constant, relevant) = c.table().linear_form().ok_or(
                    Error::StrategyNotApplicable("affine strategy needs linear connectives"),
                )?;
                let mut acc = Lin {
                    vars: BTreeSet::new(),
                    constant,
                };
                for i in relevant {
                    let arg = Lin::of(&args[i])?;
                    acc.constant ^= arg.constant;
                    for v in arg.vars {
                        if !acc.vars.remove(&v) {
                            acc.vars.insert(v);
                        }
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Each premise asserts `⨁ vars = 1 ⊕ constant`; entailment of `φ` is
/// inconsistency of the premises with `φ = 0`.
pub(super) fn affine_entails(
    premises: &[Lin],
    assumptions: &[Literal],
    target: Option<&Prop>,
) -> Result<bool> {
    let negated = target.map(Lin::of).transpose()?;
    let width = premises
        .iter()
        .chain(negated.iter())
        .flat_map(|l| l.vars.iter().map(|&v| v as usize + 1))
        .chain(assumptions.iter().map(|a| a.var as usize + 1))
        .max()
        .unwrap_or(0);
    let rhs = width;
    let row = |vars: &mut dyn Iterator<Item = u32>, value: bool| {
        let mut r = BitRow::from_ones(width + 1, vars.map(|v| v as usize));
        r.set(rhs, value);
        r
    };
    let mut rows: Vec<BitRow> = premises
        .iter()
        .map(|l| row(&mut l.vars.iter().copied(), !l.constant))
        .collect();
    if let Some(n) = &negated {
        rows.push(row(&mut n.vars.iter().copied(), n.constant));
    }
    rows.extend(
        assumptions
            .iter()
            .map(|a| row(&mut core::iter::once(a.var), a.value)),
    );
    let rank = reduce_rows(&mut rows, 0..width).len();
    Ok(rows[rank..].iter().any(|r| r.get(rhs)))
}
