use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by construction, verification and quadrature routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A denominator Pochhammer or recurrence denominator vanishes.
    #[error("degenerate parameters: {factor} vanishes")]
    DegenerateParameters { factor: String },

    /// A hypothesis of the orthogonality theorem fails for these parameters.
    #[error("parameter condition violated: {0}")]
    ConditionViolated(String),

    /// Exact division by a polynomial left a nonzero remainder.
    #[error("exact polynomial division left a nonzero remainder")]
    ExactDivisionFailed,

    /// The lattice step polynomial lambda(x+1) - lambda(x) is zero.
    #[error("lattice step is the zero polynomial")]
    ZeroLatticeStep,

    /// A polynomial in x could not be rewritten as a polynomial on the lattice.
    #[error("polynomial is not symmetric with respect to the lattice")]
    NotLatticeSymmetric,

    #[error("x = {x} lies outside the support 0..={n}")]
    OutOfSupport { x: i64, n: i64 },

    #[error("gamma argument {arg} is at a pole")]
    PoleHit { arg: Complex64 },

    #[error("contour invalid: {0}")]
    ContourInvalid(String),

    #[error("quadrature tail {tail:e} exceeds tolerance {tolerance:e}")]
    TailTooFat { tail: f64, tolerance: f64 },

    #[error("Gram-Schmidt breakdown at degree {step}: pivot {pivot:e} vs scale {scale:e}")]
    NumericBreakdown { step: usize, pivot: f64, scale: f64 },

    #[error("series diverges for |c| = {modulus} >= 1")]
    SeriesDiverges { modulus: f64 },

    #[error("no counterpart family: {0}")]
    NoCounterpart(String),

    /// The operation needs a family with finitely many mass points.
    #[error("{0} is not a finite family")]
    NotFinite(String),

    #[error("root finder did not converge after {iterations} iterations (worst residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn degenerate(factor: impl Into<String>) -> Error {
    Error::DegenerateParameters {
        factor: factor.into(),
    }
}
