//! Upper bounds on the admissibility index of maximal output admissible sets
//! for discrete-time linear systems, with exact computation for comparison.
//!
//! - [`power_series`]: bound `m₁` from the characteristic polynomial of `A`.
//! - [`lyapunov_bound`]: bound `m₂` from nested Lyapunov level sets.
//! - [`mas`]: exact `t*` by LP redundancy elimination.
//! - [`montecarlo`]: random systems and the comparison study.
//!
//! Each function comes in an unforced form and a constant-input form, where
//! the steady-state output is confined to `(1 − ε)` times the constraint box.

pub mod admissible;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod lyapunov_bound;
pub mod mas;
pub mod model;
pub mod montecarlo;
pub mod power_series;
pub mod report;
pub mod tol;

pub use error::{Error, Result};
pub use model::{LtiSystem, OutputBox};
pub use report::{BoundReport, Method, Regime};
