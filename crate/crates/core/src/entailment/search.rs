//! Tseitin encoding of [`Prop`] circuits and a small DPLL solver.

use alloc::vec;
use alloc::vec::Vec;

use super::{Literal, Prop};

/// `var << 1 | negated`.
type Lit = u32;

fn lit(var: u32, negated: bool) -> Lit {
    var << 1 | negated as u32
}

#[derive(Clone, Copy)]
enum Enc {
    Const(bool),
    Lit(Lit),
}

struct Encoder<'a> {
    clauses: &'a mut Vec<Vec<Lit>>,
    next_var: u32,
    map_var: &'a dyn Fn(u32) -> u32,
}

impl Encoder<'_> {
    fn encode(&mut self, prop: &Prop) -> Enc {
        match prop {
            Prop::Const(b) => Enc::Const(*b),
            Prop::Var(v) => Enc::Lit(lit((self.map_var)(*v), false)),
            Prop::Gate(c, args) => {
                let encoded: Vec<Enc> = args.iter().map(|a| self.encode(a)).collect();
                self.gate(c.table(), &encoded)
            }
        }
    }

    fn gate(&mut self, table: &crate::clones::TruthTable, args: &[Enc]) -> Enc {
        let n = args.len();
        let mut fixed = 0usize;
        let mut free: Vec<(usize, Lit)> = Vec::new();
        for (i, a) in args.iter().enumerate() {
            match *a {
                Enc::Const(true) => fixed |= 1 << (n - 1 - i),
                Enc::Const(false) => {}
                Enc::Lit(l) => free.push((n - 1 - i, l)),
            }
        }
        // values[r]: bit j of r is the value of free[j]
        let row_of = |r: usize, free: &[(usize, Lit)]| {
            free.iter()
                .enumerate()
                .fold(fixed, |row, (j, &(shift, _))| row | (r >> j & 1) << shift)
        };
        let mut values: Vec<bool> = (0..1usize << free.len())
            .map(|r| table.get(row_of(r, &free)))
            .collect();
        // Drop free arguments the restricted function ignores.
        let mut j = 0;
        while j < free.len() {
            let bit = 1 << j;
            let relevant = (0..values.len()).any(|r| r & bit == 0 && values[r] != values[r | bit]);
            if relevant {
                j += 1;
                continue;
            }
            // Rows with bit j clear, in order, are the rows of the smaller table.
            values = (0..values.len())
                .filter(|r| r & bit == 0)
                .map(|r| values[r])
                .collect();
            free.remove(j);
        }
        match free.len() {
            0 => Enc::Const(values[0]),
            1 => Enc::Lit(free[0].1 ^ values[0] as u32),
            k => {
                let g = self.next_var;
                self.next_var += 1;
                for (r, &value) in values.iter().enumerate() {
                    let mut clause: Vec<Lit> =
                        (0..k).map(|j| free[j].1 ^ (r >> j & 1) as u32).collect();
                    clause.push(lit(g, !value));
                    self.clauses.push(clause);
                }
                Enc::Lit(lit(g, false))
            }
        }
    }
}

/// Premises in clausal form. Variables below `num_vars` are the abstracted
/// ones; larger indices are gate variables.
pub(super) struct Cnf {
    num_vars: u32,
    next_var: u32,
    clauses: Vec<Vec<Lit>>,
    unsat: bool,
}

impl Cnf {
    pub(super) fn from_premises(premises: &[Prop], num_vars: usize) -> Self {
        let mut clauses = Vec::new();
        let identity = |v: u32| v;
        let mut enc = Encoder {
            clauses: &mut clauses,
            next_var: num_vars as u32,
            map_var: &identity,
        };
        let mut unsat = false;
        let mut units = Vec::new();
        for p in premises {
            match enc.encode(p) {
                Enc::Const(true) => {}
                Enc::Const(false) => unsat = true,
                Enc::Lit(l) => units.push(l),
            }
        }
        let next_var = enc.next_var;
        clauses.extend(units.into_iter().map(|l| vec![l]));
        Cnf {
            num_vars: num_vars as u32,
            next_var,
            clauses,
            unsat,
        }
    }

    /// Satisfiability of the premises plus `assumptions`, plus `¬target` when given.
    pub(super) fn satisfiable_with(&self, assumptions: &[Literal], target: Option<&Prop>) -> bool {
        if self.unsat {
            return false;
        }
        let num_vars = self.num_vars;
        let late = self.next_var;
        let map_var = move |v: u32| {
            if v < num_vars {
                v
            } else {
                late + (v - num_vars)
            }
        };
        let bound = target.map_or(0, Prop::var_bound).max(
            assumptions
                .iter()
                .map(|l| l.var as usize + 1)
                .max()
                .unwrap_or(0),
        ) as u32;
        let mut extra: Vec<Vec<Lit>> = Vec::new();
        let mut enc = Encoder {
            clauses: &mut extra,
            next_var: late + bound.saturating_sub(num_vars),
            map_var: &map_var,
        };
        if let Some(t) = target {
            match enc.encode(t) {
                Enc::Const(true) => return false,
                Enc::Const(false) => {}
                Enc::Lit(l) => enc.clauses.push(vec![l ^ 1]),
            }
        }
        let total = enc.next_var as usize;
        for a in assumptions {
            extra.push(vec![lit(map_var(a.var), !a.value)]);
        }
        let clauses: Vec<&[Lit]> = self
            .clauses
            .iter()
            .chain(extra.iter())
            .map(Vec::as_slice)
            .collect();
        Dpll::new(clauses, total).solve()
    }
}

const UNASSIGNED: u8 = 2;

struct Dpll<'a> {
    clauses: Vec<&'a [Lit]>,
    /// 0 = false, 1 = true, 2 = unassigned
    value: Vec<u8>,
    trail: Vec<u32>,
}

enum Step {
    Conflict,
    Stable,
}

impl<'a> Dpll<'a> {
    fn new(clauses: Vec<&'a [Lit]>, num_vars: usize) -> Self {
        Dpll {
            clauses,
            value: vec![UNASSIGNED; num_vars],
            trail: Vec::new(),
        }
    }

    #[inline]
    fn lit_value(&self, l: Lit) -> u8 {
        match self.value[(l >> 1) as usize] {
            UNASSIGNED => UNASSIGNED,
            v => v ^ (l & 1) as u8,
        }
    }

    fn assign(&mut self, l: Lit) {
        self.value[(l >> 1) as usize] = (l & 1 ^ 1) as u8;
        self.trail.push(l >> 1);
    }

    fn undo_to(&mut self, len: usize) {
        for v in self.trail.drain(len..) {
            self.value[v as usize] = UNASSIGNED;
        }
    }

    fn propagate(&mut self) -> Step {
        loop {
            let mut changed = false;
            for k in 0..self.clauses.len() {
                let clause = self.clauses[k];
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for &l in clause {
                    match self.lit_value(l) {
                        1 => {
                            satisfied = true;
                            break;
                        }
                        UNASSIGNED => {
                            open_count += 1;
                            open = Some(l);
                        }
                        _ => {}
                    }
                }
                if satisfied {
                    continue;
                }
                match open_count {
                    0 => return Step::Conflict,
                    1 => {
                        self.assign(open.expect("one open literal"));
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Step::Stable;
            }
        }
    }

    /// An unassigned literal of some clause that is not yet satisfied.
    fn pick(&self) -> Option<Lit> {
        self.clauses.iter().find_map(|clause| {
            if clause.iter().any(|&l| self.lit_value(l) == 1) {
                return None;
            }
            clause
                .iter()
                .copied()
                .find(|&l| self.lit_value(l) == UNASSIGNED)
        })
    }

    fn solve(mut self) -> bool {
        // (trail length before the decision, decided literal, already flipped)
        let mut decisions: Vec<(usize, Lit, bool)> = Vec::new();
        loop {
            match self.propagate() {
                Step::Stable => match self.pick() {
                    None => return true,
                    Some(l) => {
                        decisions.push((self.trail.len(), l, false));
                        self.assign(l);
                    }
                },
                Step::Conflict => loop {
                    let Some((len, l, flipped)) = decisions.pop() else {
                        return false;
                    };
                    self.undo_to(len);
                    if !flipped {
                        decisions.push((len, l ^ 1, true));
                        self.assign(l ^ 1);
                        break;
                    }
                },
            }
        }
    }
}
