//! Upper bound on the admissibility index from quadratic Lyapunov level sets.
//!
//! With `AᵀPA − P = −Q`, the function `V(x) = xᵀPx` decays by at least `σ` per
//! step. The largest level set inside the constraint set has level `r₁`, the
//! smallest one containing `O_{n−1}` has level `r₂`, and every trajectory from
//! `O_{n−1}` enters `Ω_{r₁}` after `log(r₁/r₂)/log σ` steps.

use serde::{Deserialize, Serialize};

pub use crate::admissible::{build_o_prefix, build_o_prefix_forced};
use crate::error::{Error, Result};
use crate::geometry::{enumerate_vertices_with, VertexConfig};
use crate::linalg::{dot, solve_discrete_lyapunov, spectral_radius, sym_eig_extremes, Matrix};
use crate::model::{LtiSystem, OutputBox};
use crate::power_series::check_epsilon;
use crate::report::{BoundReport, Diagnostics, Method, Regime};

/// How the per-step decay factor is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaMode {
    /// `σ = 1 − λ_min(Q)/λ_max(P)`, valid for every stable `A`.
    #[default]
    Eq25,
    /// `σ = ρ(A)²`; can understate the decay rate of `V` for non-normal `A`.
    Paper,
}

impl std::str::FromStr for SigmaMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "eq25" => Ok(Self::Eq25),
            "paper" => Ok(Self::Paper),
            other => Err(format!("unknown sigma mode `{other}` (expected eq25 or paper)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetPair {
    pub p: Matrix,
    pub q: Matrix,
    pub sigma: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Everything computed on the way to `m₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovAnalysis {
    pub pair: LevelSetPair,
    /// Vertices of `O_{n−1}` (unforced) or `Õ_{n−1}` in `(z, u)` (forced).
    pub vertices: Vec<Vec<f64>>,
    pub report: BoundReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovConfig {
    pub sigma_mode: SigmaMode,
    pub vertex: VertexConfig,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self { sigma_mode: SigmaMode::Eq25, vertex: VertexConfig::default() }
    }
}

impl LyapunovConfig {
    pub fn with_sigma_mode(sigma_mode: SigmaMode) -> Self {
        Self { sigma_mode, ..Self::default() }
    }
}

/// `r₁ = min_j (s·min(y_jˡ, y_jᵘ))² / (c_jP⁻¹c_jᵀ)`.
pub fn compute_r1(p: &Matrix, c: &Matrix, bx: &OutputBox, scale: f64) -> Result<f64> {
    if c.cols() != p.rows() || c.rows() != bx.len() {
        return Err(Error::Dimension {
            context: "compute_r1",
            detail: format!("P is {}x{}, C is {}x{}, box has {} outputs", p.rows(), p.cols(), c.rows(), c.cols(), bx.len()),
        });
    }
    let pinv_ct = p.solve(&c.transpose())?;
    let mut r1 = f64::INFINITY;
    for j in 0..c.rows() {
        let w = dot(c.row(j), &pinv_ct.col(j));
        if w <= 0.0 {
            // c_j = 0 imposes no constraint on x
            continue;
        }
        let lim = scale * bx.lower()[j].min(bx.upper()[j]);
        r1 = r1.min(lim * lim / w);
    }
    if !r1.is_finite() {
        return Err(Error::InvalidArgument("every output row of C is zero".into()));
    }
    Ok(r1)
}

/// `r₂ = max_v v̄ᵀPv̄` where `v̄` keeps the first `n` coordinates of `v`.
pub fn compute_r2(p: &Matrix, vertices: &[Vec<f64>], n: usize) -> Result<f64> {
    if vertices.is_empty() {
        return Err(Error::InvalidArgument("compute_r2 needs at least one vertex".into()));
    }
    if p.rows() != n || vertices.iter().any(|v| v.len() < n) {
        return Err(Error::Dimension { context: "compute_r2", detail: format!("P is {}x{}, projection onto {n}", p.rows(), p.cols()) });
    }
    Ok(vertices.iter().map(|v| p.quad_form(&v[..n])).fold(f64::NEG_INFINITY, f64::max))
}

/// Decay factor of `V` along trajectories, in `[0, 1)`.
pub fn compute_sigma(a: &Matrix, p: &Matrix, q: &Matrix, mode: SigmaMode) -> Result<f64> {
    let sigma = match mode {
        SigmaMode::Eq25 => {
            let (q_min, _) = sym_eig_extremes(q)?;
            let (_, p_max) = sym_eig_extremes(p)?;
            1.0 - q_min / p_max
        }
        SigmaMode::Paper => {
            let rho = spectral_radius(a)?;
            rho * rho
        }
    };
    if !(sigma < 1.0) {
        return Err(Error::Numerical(format!("decay factor {sigma} is not below 1")));
    }
    Ok(sigma.max(0.0))
}

/// `m = ⌊log(r₁/r₂)/log σ⌋` clamped at zero, plus the unclamped ratio and
/// whether it sits on an integer.
pub fn bound_m2_detailed(r1: f64, r2: f64, sigma: f64) -> Result<(usize, Option<f64>, bool)> {
    if !(r1 > 0.0) || !(r2 > 0.0) {
        return Err(Error::InvalidArgument(format!("radii must be positive (r1 = {r1}, r2 = {r2})")));
    }
    if !(0.0..1.0).contains(&sigma) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} outside [0, 1)")));
    }
    if sigma == 0.0 {
        return Ok((0, None, false));
    }
    let ratio = (r1 / r2).ln() / sigma.ln() + 0.0;
    let boundary = r1 < r2 && (ratio - ratio.round()).abs() <= 1e-9 * ratio.abs().max(1.0);
    if r1 >= r2 {
        return Ok((0, Some(ratio), false));
    }
    Ok((ratio.floor().max(0.0) as usize, Some(ratio), boundary))
}

pub fn bound_m2(r1: f64, r2: f64, sigma: f64) -> Result<usize> {
    bound_m2_detailed(r1, r2, sigma).map(|(m, _, _)| m)
}

fn lyapunov_pair(sys: &LtiSystem, mode: SigmaMode) -> Result<(Matrix, Matrix, f64)> {
    let n = sys.order();
    let q = Matrix::identity(n);
    let p = solve_discrete_lyapunov(sys.a(), &q)?;
    let sigma = compute_sigma(sys.a(), &p, &q, mode)?;
    Ok((p, q, sigma))
}

fn finish(
    regime: Regime,
    p: Matrix,
    q: Matrix,
    sigma: f64,
    r1: f64,
    vertices: Vec<Vec<f64>>,
    n: usize,
) -> Result<LyapunovAnalysis> {
    let r2 = compute_r2(&p, &vertices, n)?;
    let (m, ratio, boundary_integer) = bound_m2_detailed(r1, r2, sigma)?;
    let report = BoundReport {
        method: Method::Lyapunov,
        regime,
        m,
        diagnostics: Diagnostics::Lyapunov { sigma, r1, r2, ratio, boundary_integer, vertex_count: vertices.len() },
    };
    Ok(LyapunovAnalysis { pair: LevelSetPair { p, q, sigma, r1, r2 }, vertices, report })
}

fn check_dim(d: usize, config: &LyapunovConfig) -> Result<()> {
    let cap = config.vertex.dimension_cap;
    if d > cap {
        return Err(Error::DimensionCap { dim: d, cap });
    }
    Ok(())
}

/// Full unforced analysis with `Q = I`.
pub fn analyze_unforced(sys: &LtiSystem, bx: &OutputBox, config: &LyapunovConfig) -> Result<LyapunovAnalysis> {
    let n = sys.order();
    check_dim(n, config)?;
    let (p, q, sigma) = lyapunov_pair(sys, config.sigma_mode)?;
    let r1 = compute_r1(&p, sys.c(), bx, 1.0)?;
    let poly = enumerate_vertices_with(&build_o_prefix(sys, bx, n - 1)?, &config.vertex)?;
    let vertices = poly.vertices().expect("enumeration fills vertices").to_vec();
    finish(Regime::Unforced, p, q, sigma, r1, vertices, n)
}

/// Full forced analysis: `r₁` shrinks by `ε²`, `r₂` ranges over `Õ_{n−1}` projected to `z`.
pub fn analyze_forced(sys: &LtiSystem, bx: &OutputBox, epsilon: f64, config: &LyapunovConfig) -> Result<LyapunovAnalysis> {
    check_epsilon(epsilon)?;
    if !sys.is_forced() {
        return Err(Error::Unforced);
    }
    let n = sys.order();
    check_dim(n + sys.inputs(), config)?;
    let (p, q, sigma) = lyapunov_pair(sys, config.sigma_mode)?;
    let r1 = compute_r1(&p, sys.c(), bx, epsilon)?;
    let poly = enumerate_vertices_with(&build_o_prefix_forced(sys, bx, epsilon, n - 1)?, &config.vertex)?;
    let vertices = poly.vertices().expect("enumeration fills vertices").to_vec();
    finish(Regime::Forced, p, q, sigma, r1, vertices, n)
}

pub fn bound_m2_unforced(sys: &LtiSystem, bx: &OutputBox) -> Result<BoundReport> {
    bound_m2_unforced_with(sys, bx, &LyapunovConfig::default())
}

pub fn bound_m2_unforced_with(sys: &LtiSystem, bx: &OutputBox, config: &LyapunovConfig) -> Result<BoundReport> {
    analyze_unforced(sys, bx, config).map(|a| a.report)
}

pub fn bound_m2_forced(sys: &LtiSystem, bx: &OutputBox, epsilon: f64) -> Result<BoundReport> {
    bound_m2_forced_with(sys, bx, epsilon, &LyapunovConfig::default())
}

pub fn bound_m2_forced_with(sys: &LtiSystem, bx: &OutputBox, epsilon: f64, config: &LyapunovConfig) -> Result<BoundReport> {
    analyze_forced(sys, bx, epsilon, config).map(|a| a.report)
}
