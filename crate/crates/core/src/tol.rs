//! Numerical tolerances shared by every module.
//!
//! All comparisons against zero go through one of these fields. The
//! defaults are what the bound algorithms and the exact admissible-set
//! construction were validated with; `MASBOUND_TOL` overrides the shared
//! redundancy/feasibility tolerance at the CLI level.

use serde::{Deserialize, Serialize};

/// Environment variable that overrides [`Tolerances::redundancy`] and
/// [`Tolerances::feasibility`].
pub const TOL_ENV_VAR: &str = "MASBOUND_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// A row is redundant when its LP maximum is at most `rhs + redundancy`.
    pub redundancy: f64,
    /// Primal feasibility and ratio-test tolerance for the simplex.
    pub feasibility: f64,
    /// Pivot magnitudes below this are treated as zero.
    pub pivot: f64,
    /// Constraint activity tolerance for vertex enumeration.
    pub vertex_active: f64,
    /// Vertices closer than this are merged.
    pub vertex_merge: f64,
    /// Rows with a smaller Euclidean norm are treated as constant rows.
    pub zero_row: f64,
    /// Allowed asymmetry for routines that require symmetric input.
    pub symmetry: f64,
    /// Relative convergence threshold for iterative eigen solvers.
    pub eigen: f64,
    /// Relative residual bound accepted from the Lyapunov solve.
    pub lyapunov_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            redundancy: 1e-9,
            feasibility: 1e-9,
            pivot: 1e-11,
            vertex_active: 1e-9,
            vertex_merge: 1e-8,
            zero_row: 1e-12,
            symmetry: 1e-10,
            eigen: 1e-14,
            lyapunov_residual: 1e-8,
        }
    }
}

impl Tolerances {
    /// Defaults with the shared tolerance taken from `MASBOUND_TOL` when it
    /// is set to a positive finite number.
    pub fn from_env() -> std::result::Result<Self, String> {
        let mut tol = Self::default();
        if let Ok(raw) = std::env::var(TOL_ENV_VAR) {
            let value: f64 = raw
                .trim()
                .parse()
                .map_err(|_| format!("{TOL_ENV_VAR}: cannot parse {raw:?} as a number"))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(format!("{TOL_ENV_VAR}: tolerance must be positive, got {value}"));
            }
            tol.redundancy = value;
            tol.feasibility = value;
        }
        Ok(tol)
    }
}
