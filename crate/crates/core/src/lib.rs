//! Nullity sequences of embedded Toeplitz matrices over prime fields.
//!
//! A Toeplitz matrix of order `n` is `(n+1) x (n+1)` and sits in the top-left
//! corner of every order-`n+1` matrix extending it. Following the nullities
//! along such an embedded sequence gives a nullity string whose shape is
//! constrained, and whose one-step transitions are counted by weights that
//! depend only on the last two nullities. This crate provides:
//!
//! - [`field`]: arithmetic in GF(q) for small primes `q`.
//! - [`toeplitz`]: specs, exact rank, nullity and canonical kernels, with a
//!   bit-packed path over GF(2).
//! - [`kernel_structure`]: the nullity-string grammar and checkable
//!   predicates on how kernels shift along a sequence.
//! - [`counting`]: the weighted automaton, exact count tables and the GF(2)
//!   closed forms.
//! - [`enumeration`]: exhaustive and sampled scans used as the oracle for
//!   everything above.

pub mod counting;
pub mod enumeration;
pub mod error;
pub mod field;
pub mod kernel_structure;
pub mod toeplitz;

pub use counting::{count_table, CountTable, PairClass, PairState, ThetaEta};
pub use enumeration::{Counterexample, RuleReport, ScanOptions, StructureReport};
pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use kernel_structure::{NullityString, Vector};
pub use toeplitz::{BitMatrix, DenseMatrix, Eliminator, KernelBasis, RankNullity, ToeplitzSpec};
