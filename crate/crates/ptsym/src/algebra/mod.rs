//! Exact algebra over Hermite products and normal-ordered differential operators.

pub mod diffop;
pub mod gauss;
pub mod json;
pub mod monomial;
pub mod series;

pub use diffop::{DiffOp, Factor, OpKey, Word};
pub use gauss::GaussRational;
pub use monomial::{from_monomials, to_monomials, MonomialPoly};
pub use series::{hermite_norm, HermiteSeries, MultiIndex, PiMultiple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("arity must be 1, 2 or 3, got {0}")]
    InvalidArity(usize),
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("axis {axis} out of range for arity {arity}")]
    AxisOutOfRange { axis: usize, arity: usize },
    #[error("malformed serialized form: {0}")]
    Malformed(String),
}
