//! Exact arithmetic for quadratic lattices over real quadratic fields.
//!
//! This crate decides, with no floating point anywhere, questions about
//! positive definite quadratic lattices over the ring of integers of a real
//! quadratic field `Q(√d)`: which totally positive integers a lattice
//! represents, whether it is universal up to a trace bound, and whether a
//! family of vectors extracted from it is linearly independent. Everything is
//! carried by exact integer, rational, and `(p + q√d)/den` arithmetic, so
//! every verdict is a certificate rather than an approximation.
//!
//! The main entry points, in dependency order:
//!
//! * [`qfield`] — fields `Q(√d)`, algebraic integers `a + bω_d`, exact signs
//!   under both real embeddings, totally positive enumeration.
//! * [`exact`] — determinants, Sylvester-style definiteness certification,
//!   and an exact rational LDLᵀ used to bound lattice-point searches.
//! * [`lattice`] — Gram matrices, the rational trace form, and integrality
//!   of sublattices spanned by small-norm vectors.
//! * [`represent`] — complete bounded enumeration deciding `Q(x) = t`.
//! * [`universal`] — 15-/290-criterion checks over `Z`, truncated
//!   universality over `O_F`, and escalation to independent quadruples.
//! * [`bounds`] — the determinant perturbation bound chain, trace lower
//!   bounds, and the two explicit discriminant thresholds.
//! * [`obstruction`] — the rank-certificate pipeline assembling an 8×8 Gram
//!   matrix and certifying its determinant positive.
//!
//! A narrative guide with runnable examples lives in the `book/` directory of
//! the repository and is mirrored here as the [`guide`] module so that every
//! snippet in the book is compiled and run by `cargo test --doc`.

// Indexed loops over named dimensions are clearer than iterator chains in
// the matrix code.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod error;
pub mod exact;
pub mod guide;
pub mod lattice;
pub mod obstruction;
pub mod qfield;
pub mod represent;
pub mod rng;
pub mod universal;

mod parallel;

pub use error::{Error, Result};
pub use qfield::{AlgInt, Branch, Embedding, FieldElem, QuadField};

/// Sets the worker-thread count used by parallelizable operations.
///
/// Defaults to the machine's available parallelism. The CLI wires the
/// `UQLAT_THREADS` environment variable through this.
pub fn set_thread_count(n: usize) {
    parallel::set_thread_count(n);
}
