//! Scalar arithmetic: exact rationals, arbitrary-precision complex balls,
//! and algebraic numbers described by evaluation recipes.
//!
//! Every inexact quantity in this crate is a [`Ball`]: a complex center with
//! a radius that provably contains the true value.  Exact rationals stay
//! exact for as long as possible; only genuinely algebraic data (roots of
//! unity, radicals, ...) is pushed through ball arithmetic, at an explicit
//! working precision measured in bits.

mod ball;
mod bigfloat;
mod roots;
mod value;

pub use ball::Ball;
pub use bigfloat::BigFloat;
pub use roots::refine_root;
pub use value::{
    eval_value, exact_rational, is_zero_heuristic, parse_rational, AlgebraicValue, RootSpec,
    ZeroStatus,
};

use num_rational::BigRational;
use thiserror::Error;

/// Default working precision (bits) used when a caller does not choose one.
pub const DEFAULT_PRECISION: u32 = 256;
/// Smallest accepted working precision.
pub const MIN_PRECISION: u32 = 64;
/// Largest accepted working precision.
pub const MAX_PRECISION: u32 = 4096;

/// Errors produced by scalar evaluation and root refinement.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumError {
    /// A divisor was exactly zero (provable, not a precision artifact).
    #[error("division by a provably zero value")]
    DivisionByZero,
    /// The requested accuracy was not reached within the escalation budget.
    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(u32),
    /// The seed ball of a root recipe failed the interval-Newton
    /// contraction test, so it does not isolate a simple root.
    #[error("seed ball does not isolate a simple root")]
    NonIsolatingSeed,
    /// The seed ball appears to contain a multiple root (gcd of the
    /// polynomial and its derivative vanishes there).
    #[error("seed ball contains a multiple root")]
    MultipleRoot,
    /// A recipe was structurally invalid (wrong arity, non-integer
    /// exponent, empty polynomial, ...).
    #[error("malformed value recipe: {0}")]
    Malformed(String),
}

/// Clamp a requested precision into the supported range.
pub fn clamp_precision(bits: u32) -> u32 {
    bits.clamp(MIN_PRECISION, MAX_PRECISION)
}

/// Shorthand used across the crate for integer-valued rationals.
pub fn rational_from_integer(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}
