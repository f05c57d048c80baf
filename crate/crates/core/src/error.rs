use thiserror::Error;

/// Errors raised by the numerical routines and the bound algorithms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: {detail}")]
    Dimension { context: &'static str, detail: String },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence { routine: &'static str, iterations: usize },

    #[error("system is not asymptotically stable (spectral radius {spectral_radius})")]
    Unstable { spectral_radius: f64 },

    #[error("system has no input matrix")]
    Unforced,

    #[error("epsilon must lie in (0, 1], got {0}")]
    EpsilonOutOfRange(f64),

    #[error("invalid output box: {0}")]
    InvalidBox(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} exceeded iteration cap of {cap}")]
    IterationCap { what: &'static str, cap: usize },

    #[error("coefficient recursion diverged (norm {norm:e} at t = {t})")]
    Diverged { t: usize, norm: f64 },

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("polytope is empty")]
    Infeasible,

    #[error("dimension {dim} exceeds the vertex enumeration cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("simplex exceeded {pivots} pivots")]
    Cycling { pivots: usize },

    #[error("{0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
