//! Exact admissibility index by adding output constraints one time step at a
//! time and discarding those an LP certifies as redundant.
//!
//! `t*` is the first `t` at which every row for time `t + 1` is redundant with
//! respect to `O_t`. Since `O_{t+1} = O_t` makes `O_t` positively invariant,
//! this single-step test already proves `O_t = O_∞`.

use serde::Serialize;

use crate::admissible::OutputRows;
use crate::error::{Error, Result};
use crate::geometry::{is_redundant_with, Polytope};
use crate::linalg::Matrix;
use crate::model::{LtiSystem, OutputBox};
use crate::power_series::check_epsilon;
use crate::report::Regime;
use crate::tol::Tolerances;

pub const DEFAULT_ITERATION_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasConfig {
    /// Largest `t` examined before giving up.
    pub iteration_cap: usize,
    pub tol: Tolerances,
    /// Re-check every surviving row once `t*` is known.
    pub final_prune: bool,
}

impl Default for MasConfig {
    fn default() -> Self {
        Self { iteration_cap: DEFAULT_ITERATION_CAP, tol: Tolerances::default(), final_prune: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MasResult {
    pub t_star: usize,
    /// Non-redundant H-representation; `(z₀, u)` coordinates when forced.
    pub polytope: Polytope,
    pub regime: Regime,
    pub epsilon: Option<f64>,
    /// `(I − A)⁻¹B`, so that `x₀ = z₀ + shift·u` in the forced case.
    pub shift: Option<Matrix>,
}

/// Serializable summary of a [`MasResult`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MasSummary {
    pub t_star: usize,
    pub regime: Regime,
    pub epsilon: Option<f64>,
    pub dim: usize,
    pub inequalities: usize,
}

impl MasResult {
    pub fn summary(&self) -> MasSummary {
        MasSummary {
            t_star: self.t_star,
            regime: self.regime,
            epsilon: self.epsilon,
            dim: self.polytope.dim(),
            inequalities: self.polytope.len(),
        }
    }
}

pub fn exact_t_star_unforced(sys: &LtiSystem, bx: &OutputBox) -> Result<MasResult> {
    exact_t_star_unforced_with(sys, bx, &MasConfig::default())
}

pub fn exact_t_star_unforced_with(sys: &LtiSystem, bx: &OutputBox, config: &MasConfig) -> Result<MasResult> {
    require_stable(sys)?;
    let gen = OutputRows::unforced(sys, bx)?;
    let (t_star, polytope) = grow(gen, Vec::new(), config)?;
    Ok(MasResult { t_star, polytope, regime: Regime::Unforced, epsilon: None, shift: None })
}

pub fn exact_t_star_forced(sys: &LtiSystem, bx: &OutputBox, epsilon: f64) -> Result<MasResult> {
    exact_t_star_forced_with(sys, bx, epsilon, &MasConfig::default())
}

pub fn exact_t_star_forced_with(sys: &LtiSystem, bx: &OutputBox, epsilon: f64, config: &MasConfig) -> Result<MasResult> {
    check_epsilon(epsilon)?;
    require_stable(sys)?;
    let gen = OutputRows::forced(sys, bx)?;
    let steady = gen.steady_state(epsilon);
    let (t_star, polytope) = grow(gen, steady, config)?;
    let b = sys.b().ok_or(Error::Unforced)?;
    let i_minus_a = &Matrix::identity(sys.order()) - sys.a();
    let shift = i_minus_a.solve(b)?;
    Ok(MasResult { t_star, polytope, regime: Regime::Forced, epsilon: Some(epsilon), shift: Some(shift) })
}

fn require_stable(sys: &LtiSystem) -> Result<()> {
    let rho = sys.spectral_radius()?;
    if rho >= 1.0 {
        return Err(Error::Unstable { spectral_radius: rho });
    }
    Ok(())
}

fn grow(mut gen: OutputRows, first: Vec<(Vec<f64>, f64)>, config: &MasConfig) -> Result<(usize, Polytope)> {
    let mut p = Polytope::new(gen.dim());
    for (row, rhs) in first.into_iter().chain(gen.current()) {
        p.push(row, rhs)?;
    }
    loop {
        let t = gen.t();
        if t >= config.iteration_cap {
            return Err(Error::IterationCap { what: "admissible set construction", cap: config.iteration_cap });
        }
        gen.advance();
        let mut fresh = Vec::new();
        for (row, rhs) in gen.current() {
            if !is_redundant_with(&row, rhs, &p, &config.tol)? {
                fresh.push((row, rhs));
            }
        }
        if fresh.is_empty() {
            if config.final_prune {
                prune(&mut p, &config.tol)?;
            }
            return Ok((t, p));
        }
        for (row, rhs) in fresh {
            p.push(row, rhs)?;
        }
    }
}

/// Drops rows implied by the others, scanning from the last row backwards.
pub fn prune(p: &mut Polytope, tol: &Tolerances) -> Result<()> {
    let mut i = p.len();
    while i > 0 {
        i -= 1;
        let rest = p.without_row(i);
        if !rest.is_empty() && is_redundant_with(p.row(i), p.rhs(i), &rest, tol)? {
            *p = rest;
        }
    }
    Ok(())
}

/// Checks that the rows for `t* + 1, …, t* + extra` are redundant for `result`.
pub fn verify_certificate(sys: &LtiSystem, bx: &OutputBox, result: &MasResult, extra: usize, tol: &Tolerances) -> Result<bool> {
    let mut gen = match result.regime {
        Regime::Unforced => OutputRows::unforced(sys, bx)?,
        Regime::Forced => OutputRows::forced(sys, bx)?,
    };
    for _ in 0..=result.t_star {
        gen.advance();
    }
    for _ in 0..extra {
        for (row, rhs) in gen.current() {
            if !is_redundant_with(&row, rhs, &result.polytope, tol)? {
                return Ok(false);
            }
        }
        gen.advance();
    }
    Ok(true)
}
