//! Exact-arithmetic toolkit for 3-dimensional germs of manifolds with a
//! commutative multiplication on the tangent bundle.
//!
//! Everything is computed over the rationals with truncated power series in
//! the two non-unit coordinates `t2, t3`.  The crate provides:
//!
//! - [`series`]: the truncated bivariate series ring and its degree-k
//!   extensions for fractional-power branch data,
//! - [`tangent`]: multiplication tables with unit `e = d1`, associativity
//!   residuals, algebra-type invariants and pointwise/generic classification,
//! - [`spectrum`]: the defining ideal of the analytic spectrum in the
//!   cotangent space, Poisson brackets and ideal reduction,
//! - [`euler`]: Euler-field candidates (with controlled `t2`-poles) and the
//!   Lie-derivative verification `Lie_E(o) = o`,
//! - [`catalog`]: constructors for all built-in normal-form families,
//! - [`pde`]: the power-series initial value solver that produces new
//!   multiplications from one-variable initial data,
//! - [`doc`]: the JSON document formats used by the command line tool.
//!
//! All verdicts are relative to the working truncation: a series is "zero"
//! when every retained coefficient vanishes.

pub mod catalog;
pub mod doc;
pub mod euler;
pub mod pde;
pub mod rat;
pub mod series;
pub mod spectrum;
pub mod tangent;

pub use rat::Rat;
pub use series::{ExtSeries, Series2};
pub use tangent::{AbcFrame, AlgebraType, GhFrame, MultTable, RInvariants};

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("series is not a unit (zero constant term)")]
    NotAUnit,
    #[error("multiplication table is not associative")]
    NotAssociative,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("frame change is degenerate: {0}")]
    FrameDegenerate(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown family: {0}")]
    UnknownFamily(String),
    #[error("vector field has a pole at the requested point")]
    PoleAtPoint,
    #[error("parse error: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
