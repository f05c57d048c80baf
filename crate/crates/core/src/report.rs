use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PowerSeries,
    Lyapunov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Unforced,
    Forced,
}

/// Method-specific details behind a bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Diagnostics {
    PowerSeries {
        /// Number of coefficient updates performed after initialisation.
        iterations: usize,
        /// Time index at which the stopping condition first held.
        stop_t: usize,
        /// Weighted coefficient sum at `stop_t` (left side of the stop rule).
        stop_value: f64,
    },
    Lyapunov {
        sigma: f64,
        r1: f64,
        r2: f64,
        /// Unclamped `log(r1/r2)/log(sigma)`, absent when sigma is zero.
        ratio: Option<f64>,
        /// The floor argument landed on an integer within rounding.
        boundary_integer: bool,
        vertex_count: usize,
    },
}

/// An upper bound on the admissibility index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub method: Method,
    pub regime: Regime,
    pub m: usize,
    pub diagnostics: Diagnostics,
}
