//! Solvers for propositional autoepistemic logic, parameterised by the set of
//! Boolean connectives a knowledge base is allowed to use.
//!
//! The crate is `no_std` (it only needs `alloc`). File IO, timing, threads and
//! the command line live in the `ael` companion crate.
//!
//! The entry point is [`dispatch::solve`]: it classifies the declared
//! signature into one of the seven constant-containing clones and routes the
//! task to the general full-set enumerator ([`fullset`]), the GF(2) pipeline
//! for affine signatures ([`affine`]) or the literal-set solver for
//! conjunctive / unary signatures ([`simple`]).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod affine;
pub mod clones;
pub mod dispatch;
pub mod entailment;
mod error;
pub mod formula;
pub mod fullset;
pub mod gf2;
pub mod reductions;
pub mod simple;
pub mod syntax;

pub use crate::clones::{CloneName, TruthTable};
pub use crate::dispatch::{solve, Algorithm, Answer, SolveOptions, SolveReport, Task};
pub use crate::entailment::Strategy;
pub use crate::error::{Error, Result};
pub use crate::formula::{Connective, Formula, KnowledgeBase, Signature};
pub use crate::fullset::{Kernel, Sign};
