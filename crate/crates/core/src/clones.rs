//! Truth tables, the five single-function membership predicates, and the
//! classifier for the seven clones of the form `[B ∪ {0,1}]`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, Signature};

/// Largest arity accepted for a connective.
pub const MAX_ARITY: usize = 16;

/// The value table of an `arity`-ary Boolean function.
///
/// Rows are ordered lexicographically over argument tuples with
/// `false < true`; the first argument is the most significant bit of the row
/// index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthTable {
    arity: u8,
    bits: Vec<u64>,
}

impl TruthTable {
    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityTooLarge(arity));
        }
        let rows = 1usize << arity;
        let mut bits = vec![0u64; rows.div_ceil(64)];
        for row in 0..rows {
            if f(row) {
                bits[row / 64] |= 1 << (row % 64);
            }
        }
        Ok(TruthTable {
            arity: arity as u8,
            bits,
        })
    }

    pub fn from_bits(arity: usize, bits: &[bool]) -> Result<Self> {
        if arity <= MAX_ARITY && bits.len() != 1 << arity {
            return Err(Error::BadDefinition(alloc::format!(
                "table for arity {arity} needs {} bits, got {}",
                1usize << arity,
                bits.len()
            )));
        }
        Self::from_fn(arity, |row| bits[row])
    }

    /// Parses a string of `0`/`1` characters, one per row.
    pub fn from_bit_str(arity: usize, text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::BadDefinition(alloc::format!(
                    "unexpected character '{other}' in truth table"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(arity, &bits)
    }

    pub fn constant(value: bool) -> Self {
        TruthTable {
            arity: 0,
            bits: vec![value as u64],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity as usize
    }

    pub fn rows(&self) -> usize {
        1 << self.arity
    }

    #[inline]
    pub fn get(&self, row: usize) -> bool {
        self.bits[row / 64] >> (row % 64) & 1 == 1
    }

    /// Row index of an argument tuple.
    pub fn row_of(args: &[bool]) -> usize {
        args.iter().fold(0, |row, &a| row << 1 | a as usize)
    }

    pub fn eval(&self, args: &[bool]) -> bool {
        debug_assert_eq!(args.len(), self.arity());
        self.get(Self::row_of(args))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.rows()).map(|r| self.get(r)).collect()
    }

    /// Bit mask selecting argument `i` inside a row index.
    #[inline]
    pub fn arg_mask(&self, i: usize) -> usize {
        1 << (self.arity() - 1 - i)
    }

    pub fn as_constant(&self) -> Option<bool> {
        let first = self.get(0);
        (0..self.rows())
            .all(|r| self.get(r) == first)
            .then_some(first)
    }

    /// Whether flipping argument `i` changes the value on some row.
    pub fn depends_on(&self, i: usize) -> bool {
        let mask = self.arg_mask(i);
        (0..self.rows()).any(|r| r & mask == 0 && self.get(r) != self.get(r | mask))
    }

    /// Arguments the function actually depends on, in increasing order.
    pub fn dependent_args(&self) -> Vec<usize> {
        (0..self.arity()).filter(|&i| self.depends_on(i)).collect()
    }

    fn mask_of(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |m, &i| m | self.arg_mask(i))
    }

    /// Fixes argument `i` to `value`, yielding a table of arity `arity - 1`.
    pub fn restrict(&self, i: usize, value: bool) -> TruthTable {
        let n = self.arity();
        let low_bits = n - 1 - i;
        let low_mask = (1usize << low_bits) - 1;
        TruthTable::from_fn(n - 1, |row| {
            let high = row >> low_bits;
            let low = row & low_mask;
            let full = (high << 1 | value as usize) << low_bits | low;
            self.get(full)
        })
        .expect("arity decreases")
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.arity()).all(|i| {
            let mask = self.arg_mask(i);
            (0..self.rows()).all(|r| r & mask != 0 || self.get(r) <= self.get(r | mask))
        })
    }

    /// `f ≡ x_{i1} ⊕ … ⊕ x_{ik} ⊕ c`.
    pub fn is_linear(&self) -> bool {
        self.linear_form().is_some()
    }

    /// The constant and the argument positions of a linear function.
    pub fn linear_form(&self) -> Option<(bool, Vec<usize>)> {
        let c = self.get(0);
        let args: Vec<usize> = (0..self.arity())
            .filter(|&i| self.get(self.arg_mask(i)) != c)
            .collect();
        let mask = self.mask_of(&args);
        (0..self.rows())
            .all(|r| self.get(r) == (c ^ ((r & mask).count_ones() % 2 == 1)))
            .then_some((c, args))
    }

    /// `f ≡ c₀ ∨ ⋁ cᵢxᵢ`: a constant or the disjunction of its relevant arguments.
    pub fn is_disjunctive(&self) -> bool {
        self.disjunctive_form().is_some()
    }

    /// `Err(c)` for a constant, `Ok(args)` when `f` is the disjunction of `args`.
    pub fn disjunctive_form(&self) -> Option<core::result::Result<Vec<usize>, bool>> {
        if let Some(c) = self.as_constant() {
            return Some(Err(c));
        }
        let args = self.dependent_args();
        let mask = self.mask_of(&args);
        (0..self.rows())
            .all(|r| self.get(r) == (r & mask != 0))
            .then_some(Ok(args))
    }

    /// The dual of [`is_disjunctive`](Self::is_disjunctive): constants and conjunctions.
    pub fn is_conjunctive(&self) -> bool {
        self.conjunctive_form().is_some()
    }

    pub fn conjunctive_form(&self) -> Option<core::result::Result<Vec<usize>, bool>> {
        if let Some(c) = self.as_constant() {
            return Some(Err(c));
        }
        let args = self.dependent_args();
        let mask = self.mask_of(&args);
        (0..self.rows())
            .all(|r| self.get(r) == (r & mask == mask))
            .then_some(Ok(args))
    }

    /// Depends on at most one argument.
    pub fn is_essentially_unary(&self) -> bool {
        self.unary_form().is_some()
    }

    /// `Err(c)` for a constant, `Ok((i, negated))` for `xᵢ` or `¬xᵢ`.
    pub fn unary_form(&self) -> Option<core::result::Result<(usize, bool), bool>> {
        if let Some(c) = self.as_constant() {
            return Some(Err(c));
        }
        let args = self.dependent_args();
        if args.len() != 1 {
            return None;
        }
        let i = args[0];
        Some(Ok((i, !self.get(self.arg_mask(i)))))
    }

    pub fn is_projection_or_constant(&self) -> bool {
        matches!(self.unary_form(), Some(Err(_)) | Some(Ok((_, false))))
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows() {
            f.write_str(if self.get(r) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// The seven clones that contain both constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CloneName {
    I,
    N,
    E,
    V,
    L,
    M,
    BF,
}

impl CloneName {
    pub const ALL: [CloneName; 7] = [
        CloneName::I,
        CloneName::N,
        CloneName::E,
        CloneName::V,
        CloneName::L,
        CloneName::M,
        CloneName::BF,
    ];

    pub fn contains_function(self, t: &TruthTable) -> bool {
        match self {
            CloneName::I => t.is_projection_or_constant(),
            CloneName::N => t.is_essentially_unary(),
            CloneName::E => t.is_conjunctive(),
            CloneName::V => t.is_disjunctive(),
            CloneName::L => t.is_linear(),
            CloneName::M => t.is_monotone(),
            CloneName::BF => true,
        }
    }

    /// Clone inclusion.
    pub fn is_subclone_of(self, other: CloneName) -> bool {
        use CloneName::*;
        match (self, other) {
            (a, b) if a == b => true,
            (I, _) | (_, BF) => true,
            (N, L) => true,
            (E, M) | (V, M) => true,
            _ => false,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CloneName::I => "I",
            CloneName::N => "N",
            CloneName::E => "E",
            CloneName::V => "V",
            CloneName::L => "L",
            CloneName::M => "M",
            CloneName::BF => "BF",
        }
    }

    /// Names of the connectives of the standard base, in signature syntax.
    pub fn base(self) -> &'static [&'static str] {
        match self {
            CloneName::BF => &["and", "not"],
            CloneName::M => &["or", "and", "0", "1"],
            CloneName::L => &["xor", "1"],
            CloneName::V => &["or", "0", "1"],
            CloneName::E => &["and", "0", "1"],
            CloneName::N => &["not", "0", "1"],
            CloneName::I => &["id", "0", "1"],
        }
    }
}

impl fmt::Display for CloneName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for CloneName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CloneName::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(alloc::format!("unknown clone '{s}'")))
    }
}

/// The least of the seven clones containing `B ∪ {0, 1}`.
pub fn classify_with_constants(signature: &Signature) -> CloneName {
    classify_tables(signature.connectives().map(|c| c.table()))
}

pub fn classify_tables<'a>(tables: impl Iterator<Item = &'a TruthTable> + Clone) -> CloneName {
    let all = |p: fn(&TruthTable) -> bool| tables.clone().all(p);
    if all(TruthTable::is_projection_or_constant) {
        CloneName::I
    } else if all(TruthTable::is_essentially_unary) {
        CloneName::N
    } else if all(TruthTable::is_disjunctive) {
        CloneName::V
    } else if all(TruthTable::is_conjunctive) {
        CloneName::E
    } else if all(TruthTable::is_linear) {
        CloneName::L
    } else if all(TruthTable::is_monotone) {
        CloneName::M
    } else {
        CloneName::BF
    }
}

/// Truth table of a belief-free formula over its atoms in sorted order.
pub fn table_of(formula: &Formula) -> Result<TruthTable> {
    let atoms: Vec<String> = formula.atoms().into_iter().collect();
    table_over(formula, &atoms)
}

/// Truth table of a belief-free formula over the given atom order.
pub fn table_over(formula: &Formula, atoms: &[String]) -> Result<TruthTable> {
    if formula.contains_belief() {
        return Err(Error::BeliefNotAllowed);
    }
    let present: BTreeSet<String> = formula.atoms();
    if let Some(missing) = present.iter().find(|a| !atoms.contains(a)) {
        return Err(Error::InvalidInput(alloc::format!(
            "atom '{missing}' missing from the requested order"
        )));
    }
    let n = atoms.len();
    let mut values = vec![false; n];
    TruthTable::from_fn(n, |row| {
        for (i, v) in values.iter_mut().enumerate() {
            *v = row >> (n - 1 - i) & 1 == 1;
        }
        formula.eval_with(&|name| {
            let i = atoms.iter().position(|a| a == name).expect("checked above");
            values[i]
        })
    })
}
