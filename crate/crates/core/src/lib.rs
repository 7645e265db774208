//! Exact reduction of Euler-Zagier multiple zeta function values at regular
//! integer points.
//!
//! The multiple zeta function zeta_r(s_1, ..., s_r) extends meromorphically
//! to all of C^r; at integer points lying off its singularity set the value
//! is an exact rational linear combination of admissible multiple zeta
//! values. This crate classifies integer points as regular or singular,
//! performs the reduction symbolically over arbitrary-precision rationals,
//! and cross-validates the result numerically by series evaluation.
//!
//! Modules:
//!
//! - [`arith`]: exact rationals, Bernoulli numbers, zeta at non-positive
//!   integers.
//! - [`stuffle`]: the harmonic (stuffle) algebra on words of linear forms,
//!   with its coproduct, antipode and word identities.
//! - [`index`]: integer argument tuples and the singularity classifier.
//! - [`reduce`]: the recurrence-driven reduction engine, depth-2/3 closed
//!   forms, the depth/weight bound check and stuffle expansion.
//! - [`numerics`]: floating-point evaluation of admissible values with a
//!   truncation bound and a persistent cache.
//! - [`selftest`]: deterministic invariant suites behind `mzr selftest`.
//!
//! The reducer's memo table and the numeric cache are not synchronized;
//! confine a [`Reducer`] or [`Evaluator`] to one thread or guard it with a
//! lock. Everything else is immutable values and pure functions.

pub mod arith;
pub mod index;
pub mod numerics;
pub mod reduce;
pub mod selftest;
pub mod stuffle;

pub use arith::{bernoulli, binomial, format_rational, parse_rational, zeta_nonpositive, Rational};
pub use index::{classify, is_admissible_mzv, positive_part_stats, IndexPoint, RegularityVerdict};
pub use numerics::{EvalConfig, Evaluator, NumericCache, NumericValue};
pub use reduce::{
    bound_check, closed_form_depth2, closed_form_depth3, stuffle_expand, MzvCombination,
    MzvIndex, PivotStrategy, ReduceError, ReductionTrace, Reducer,
};
