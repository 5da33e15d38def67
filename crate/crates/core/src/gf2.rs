//! Bit-packed rows over GF(2) and Gaussian elimination.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut row = Self::zeros(len);
        for i in ones {
            row.flip(i);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let bit = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Whether any bit inside `range` is set.
    pub fn any_in(&self, range: Range<usize>) -> bool {
        self.first_one_in(range).is_some()
    }

    pub fn first_one_in(&self, range: Range<usize>) -> Option<usize> {
        let mut i = range.start;
        while i < range.end {
            let word = self.words[i / 64] >> (i % 64);
            if word == 0 {
                i = (i / 64 + 1) * 64;
                continue;
            }
            let found = i + word.trailing_zeros() as usize;
            return (found < range.end).then_some(found);
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Parity of the bits selected by `mask`.
    pub fn dot(&self, mask: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&mask.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones_in(&self, range: Range<usize>) -> usize {
        range.filter(|&i| self.get(i)).count()
    }
}

/// Brings `rows` into reduced row echelon form, choosing pivots only among
/// `columns`. Returns the pivot column of each leading row: afterwards
/// `rows[k]` has a one in `pivots[k]`, every other row is zero there, and the
/// rows from `pivots.len()` on are zero on `columns`.
pub fn reduce_rows(rows: &mut [BitRow], columns: Range<usize>) -> Vec<usize> {
    let columns: Vec<usize> = columns.collect();
    reduce_rows_on(rows, &columns)
}

/// Solutions of `rows` read as equations over `unknowns` columns with the
/// right-hand side in column `rhs`.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    /// One solution (free unknowns set to zero), over the full row width.
    pub particular: BitRow,
    /// A basis of the homogeneous solutions.
    pub basis: Vec<BitRow>,
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Every solution, in the order of the binary counter over the basis.
    pub fn iter(&self) -> impl Iterator<Item = BitRow> + '_ {
        let d = self.basis.len();
        assert!(d < 64, "solution space too large to enumerate");
        (0..1u64 << d).map(move |combo| {
            let mut s = self.particular.clone();
            for (k, b) in self.basis.iter().enumerate() {
                if combo >> k & 1 == 1 {
                    s.xor_assign(b);
                }
            }
            s
        })
    }
}

/// Solves `rows` (consumed and reduced in place). `None` when inconsistent.
pub fn solve(rows: &mut [BitRow], unknowns: &[usize], rhs: usize) -> Option<SolutionSpace> {
    let width = rows.first().map_or(rhs + 1, BitRow::len);
    let pivots = reduce_rows_on(rows, unknowns);
    if rows[pivots.len()..].iter().any(|r| r.get(rhs)) {
        return None;
    }
    let mut particular = BitRow::zeros(width);
    for (k, &col) in pivots.iter().enumerate() {
        particular.set(col, rows[k].get(rhs));
    }
    let free: Vec<usize> = unknowns
        .iter()
        .copied()
        .filter(|c| !pivots.contains(c))
        .collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = BitRow::zeros(width);
            v.set(f, true);
            for (k, &col) in pivots.iter().enumerate() {
                if rows[k].get(f) {
                    v.set(col, true);
                }
            }
            v
        })
        .collect();
    Some(SolutionSpace { particular, basis })
}

/// Like [`reduce_rows`] but over an arbitrary ordered list of pivot columns.
pub fn reduce_rows_on(rows: &mut [BitRow], columns: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for &col in columns {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, found);
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot, tail) = tail.split_first_mut().expect("rank < len");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row.get(col) {
                row.xor_assign(pivot);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &str) -> BitRow {
        BitRow::from_ones(
            bits.len(),
            bits.char_indices()
                .filter(|(_, c)| *c == '1')
                .map(|(i, _)| i),
        )
    }

    #[test]
    fn bit_ops() {
        let mut r = BitRow::zeros(130);
        r.set(129, true);
        r.flip(3);
        assert_eq!(r.ones().collect::<Vec<_>>(), [3, 129]);
        assert_eq!(r.first_one_in(4..130), Some(129));
        assert_eq!(r.first_one_in(4..129), None);
        assert!(r.dot(&BitRow::from_ones(130, [3])));
        assert!(!r.dot(&BitRow::from_ones(130, [3, 129])));
    }

    #[test]
    fn echelon_form() {
        // x0 ^ x1 = 1, x1 ^ x2 = 0, x0 ^ x2 = 1 (dependent)
        let mut rows = [row("1101"), row("0110"), row("1011")];
        let pivots = reduce_rows(&mut rows, 0..3);
        assert_eq!(pivots, [0, 1]);
        assert!(rows[2].is_zero());
        assert_eq!(rows[0], row("1011"));
    }

    #[test]
    fn solution_space_enumerates_all_solutions() {
        let mut rows = [row("1101"), row("0110")];
        let space = solve(&mut rows, &[0, 1, 2], 3).unwrap();
        assert_eq!(space.dimension(), 1);
        let mut sols: Vec<Vec<bool>> = space
            .iter()
            .map(|s| (0..3).map(|i| s.get(i)).collect())
            .collect();
        sols.sort();
        // Brute force over all 8 assignments.
        let mut expected = Vec::new();
        for m in 0..8u8 {
            let x = |i: u8| m >> (2 - i) & 1 == 1;
            if x(0) ^ x(1) && !(x(1) ^ x(2)) {
                expected.push((0..3).map(x).collect::<Vec<_>>());
            }
        }
        expected.sort();
        assert_eq!(sols, expected);
    }

    #[test]
    fn inconsistent_system() {
        let mut rows = [row("111"), row("110")];
        assert!(solve(&mut rows, &[0, 1], 2).is_none());
    }
}
