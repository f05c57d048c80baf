//! Upper bound on the admissibility index from the Cayley–Hamilton expansion
//! `Aᵗ = Σ βᵢ(t) Aⁱ`.
//!
//! The coefficient vector starts at `β(n) = −c` (the negated lower
//! characteristic-polynomial coefficients) and advances by the companion
//! recursion. The first `t ≥ n` whose coefficients satisfy the stop rule yields
//! the bound `m = t − 1`. Only `A` and the asymmetry ratio `γ` of the box are used,
//! so the bound is invariant under radial scaling of the constraints.

use crate::error::{Error, Result};
use crate::linalg::{char_poly_coeffs, Matrix};
use crate::model::{gamma, LtiSystem, OutputBox};
use crate::report::{BoundReport, Diagnostics, Method, Regime};

/// Coefficients of `Aᵗ` in the basis `I, A, …, A^{n−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaState {
    pub t: usize,
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSeriesConfig {
    /// Maximum number of recursion steps.
    pub iteration_cap: usize,
    /// Subtracted from the right-hand side of the stop rule (default 0).
    pub safety_margin: f64,
    /// `‖β‖` above this is reported as numerical divergence.
    pub divergence_norm: f64,
}

impl Default for PowerSeriesConfig {
    fn default() -> Self {
        Self { iteration_cap: 1_000_000, safety_margin: 0.0, divergence_norm: 1e12 }
    }
}

/// `β(n) = [−c₀, …, −c_{n−1}]`.
pub fn beta_init(c: &[f64]) -> Result<BetaState> {
    if c.is_empty() {
        return Err(Error::InvalidArgument("characteristic polynomial has no coefficients".into()));
    }
    Ok(BetaState { t: c.len(), beta: c.iter().map(|v| -v).collect() })
}

/// One companion step: `β₀⁺ = −c₀β_{n−1}`, `βᵢ⁺ = β_{i−1} − cᵢβ_{n−1}`.
pub fn beta_step(s: &BetaState, c: &[f64]) -> Result<BetaState> {
    let mut next = s.clone();
    beta_step_in_place(&mut next, c)?;
    Ok(next)
}

fn beta_step_in_place(s: &mut BetaState, c: &[f64]) -> Result<()> {
    let n = c.len();
    if s.beta.len() != n {
        return Err(Error::Dimension {
            context: "beta_step",
            detail: format!("state has {} coefficients, polynomial has {n}", s.beta.len()),
        });
    }
    let last = s.beta[n - 1];
    for i in (1..n).rev() {
        s.beta[i] = s.beta[i - 1] - c[i] * last;
    }
    s.beta[0] = -c[0] * last;
    s.t += 1;
    Ok(())
}

/// Sums of the positive and of the negative coefficients.
fn signed_sums(beta: &[f64]) -> (f64, f64) {
    beta.iter().fold((0.0, 0.0), |(pos, neg), &b| {
        if b > 0.0 {
            (pos + b, neg)
        } else if b < 0.0 {
            (pos, neg + b)
        } else {
            (pos, neg)
        }
    })
}

/// Left side of the unforced stop rule: `Σ₊β − γ Σ₋β`.
pub fn weighted_sum_unforced(beta: &[f64], gamma: f64) -> f64 {
    let (pos, neg) = signed_sums(beta);
    pos - gamma * neg
}

/// Left side of the forced stop rule:
/// `(1 + γ(1−ε)) Σ₊β − (γ + (1−ε)) Σ₋β`.
pub fn weighted_sum_forced(beta: &[f64], gamma: f64, epsilon: f64) -> f64 {
    let (pos, neg) = signed_sums(beta);
    let slack = 1.0 - epsilon;
    (1.0 + gamma * slack) * pos - (gamma + slack) * neg
}

/// Unforced stop rule, non-strict: `Σ₊β − γ Σ₋β ≤ 1`.
pub fn condition_unforced(beta: &[f64], gamma: f64) -> bool {
    weighted_sum_unforced(beta, gamma) <= 1.0
}

/// Forced stop rule, non-strict; identical to the unforced rule at `ε = 1`.
pub fn condition_forced(beta: &[f64], gamma: f64, epsilon: f64) -> Result<bool> {
    check_epsilon(epsilon)?;
    Ok(weighted_sum_forced(beta, gamma, epsilon) <= epsilon)
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(epsilon))
    }
}

fn check_inputs(sys: &LtiSystem, bx: &OutputBox) -> Result<()> {
    if bx.len() != sys.outputs() {
        return Err(Error::Dimension {
            context: "power-series bound",
            detail: format!("box has {} outputs, system has {}", bx.len(), sys.outputs()),
        });
    }
    let rho = sys.spectral_radius()?;
    if rho >= 1.0 {
        return Err(Error::Unstable { spectral_radius: rho });
    }
    Ok(())
}

/// Runs the recursion until `lhs(β(t)) ≤ rhs` and returns the report.
fn run(a: &Matrix, lhs: impl Fn(&[f64]) -> f64, rhs: f64, regime: Regime, config: &PowerSeriesConfig) -> Result<BoundReport> {
    let c = char_poly_coeffs(a)?;
    let mut state = beta_init(&c)?;
    let threshold = rhs - config.safety_margin;
    let mut iterations = 0usize;
    loop {
        let value = lhs(&state.beta);
        if value <= threshold {
            return Ok(BoundReport {
                method: Method::PowerSeries,
                regime,
                m: state.t - 1,
                diagnostics: Diagnostics::PowerSeries { iterations, stop_t: state.t, stop_value: value },
            });
        }
        if iterations >= config.iteration_cap {
            return Err(Error::IterationCap { what: "power-series recursion", cap: config.iteration_cap });
        }
        beta_step_in_place(&mut state, &c)?;
        iterations += 1;
        let norm = state.beta.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        if !(norm <= config.divergence_norm) {
            return Err(Error::Diverged { t: state.t, norm });
        }
    }
}

/// Bound `m₁` for the unforced system.
pub fn bound_m1_unforced(sys: &LtiSystem, bx: &OutputBox) -> Result<BoundReport> {
    bound_m1_unforced_with(sys, bx, &PowerSeriesConfig::default())
}

pub fn bound_m1_unforced_with(sys: &LtiSystem, bx: &OutputBox, config: &PowerSeriesConfig) -> Result<BoundReport> {
    check_inputs(sys, bx)?;
    let g = gamma(bx);
    run(sys.a(), |b| weighted_sum_unforced(b, g), 1.0, Regime::Unforced, config)
}

/// Bound `m₁` for the ε-tightened constant-input admissible set.
///
/// Only `A` is used, so the input matrix does not need to be present.
pub fn bound_m1_forced(sys: &LtiSystem, bx: &OutputBox, epsilon: f64) -> Result<BoundReport> {
    bound_m1_forced_with(sys, bx, epsilon, &PowerSeriesConfig::default())
}

pub fn bound_m1_forced_with(
    sys: &LtiSystem,
    bx: &OutputBox,
    epsilon: f64,
    config: &PowerSeriesConfig,
) -> Result<BoundReport> {
    check_epsilon(epsilon)?;
    check_inputs(sys, bx)?;
    let g = gamma(bx);
    run(sys.a(), |b| weighted_sum_forced(b, g, epsilon), epsilon, Regime::Forced, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(a: f64) -> LtiSystem {
        LtiSystem::new(Matrix::scalar(a), Matrix::scalar(1.0)).unwrap()
    }

    #[test]
    fn init_examples() {
        assert_eq!(beta_init(&[-0.5]).unwrap().beta, vec![0.5]);
        assert_eq!(beta_init(&[-0.5]).unwrap().t, 1);
        assert_eq!(beta_init(&[0.25, -1.0]).unwrap().beta, vec![-0.25, 1.0]);
        assert_eq!(beta_init(&[0.85505, -0.8915, -0.82]).unwrap().beta, vec![-0.85505, 0.8915, 0.82]);
        assert!(beta_init(&[]).is_err());
    }

    #[test]
    fn step_examples() {
        let c = [0.25, -1.0];
        let s = beta_step(&beta_init(&c).unwrap(), &c).unwrap();
        assert_eq!(s.t, 3);
        assert_eq!(s.beta, vec![-0.25, 0.75]);

        let c = [-0.5];
        let s = beta_step(&beta_init(&c).unwrap(), &c).unwrap();
        assert_eq!(s.beta, vec![0.25]);

        let zero = BetaState { t: 4, beta: vec![0.0; 3] };
        assert_eq!(beta_step(&zero, &[0.3, -0.2, 0.1]).unwrap().beta, vec![0.0; 3]);
    }

    #[test]
    fn step_length_mismatch() {
        let s = BetaState { t: 2, beta: vec![1.0, 2.0] };
        assert!(matches!(beta_step(&s, &[1.0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn cubic_step_matches_direct_power() {
        // A³ = −0.25 I + 0.75 A for Δ(s) = s² − s + 0.25
        let a = Matrix::from_rows(&[[0.0, 1.0], [-0.25, 1.0]]).unwrap();
        let a3 = a.pow(3).unwrap();
        let rebuilt = &Matrix::identity(2).scale(-0.25) + &a.scale(0.75);
        assert!((&a3 - &rebuilt).max_abs() < 1e-15);
    }

    #[test]
    fn unforced_condition_examples() {
        assert!(condition_unforced(&[0.5], 1.0));
        assert!(!condition_unforced(&[-0.25, 1.0], 1.0));
        assert!(!condition_unforced(&[-0.9], 10.0));
        assert!(condition_unforced(&[-0.25, 0.75], 1.0));
    }

    #[test]
    fn forced_condition_examples() {
        assert!(condition_forced(&[0.2], 1.0, 0.5).unwrap());
        assert!(!condition_forced(&[0.0625], 1.0, 0.1).unwrap());
        for beta in [vec![0.3, -0.4], vec![0.999], vec![-0.1, -0.5, 0.2]] {
            for g in [1.0, 3.0] {
                assert_eq!(condition_forced(&beta, g, 1.0).unwrap(), condition_unforced(&beta, g));
            }
        }
        assert_eq!(condition_forced(&[0.1], 1.0, 0.0), Err(Error::EpsilonOutOfRange(0.0)));
        assert_eq!(condition_forced(&[0.1], 1.0, 1.5), Err(Error::EpsilonOutOfRange(1.5)));
    }

    #[test]
    fn m1_unforced_examples() {
        let sym = OutputBox::symmetric_unit(1);
        assert_eq!(bound_m1_unforced(&scalar(0.5), &sym).unwrap().m, 0);

        let a = Matrix::from_rows(&[[0.0, 1.0], [-0.25, 1.0]]).unwrap();
        let sys = LtiSystem::new(a, Matrix::row_vector(&[1.0, 0.0])).unwrap();
        let r = bound_m1_unforced(&sys, &sym).unwrap();
        assert_eq!(r.m, 2);
        match r.diagnostics {
            Diagnostics::PowerSeries { stop_t, stop_value, .. } => {
                assert_eq!(stop_t, 3);
                assert!((stop_value - 1.0).abs() < 1e-15);
            }
            _ => unreachable!(),
        }

        let asym = OutputBox::new(vec![0.1], vec![1.0]).unwrap();
        assert_eq!(bound_m1_unforced(&scalar(-0.9), &asym).unwrap().m, 1);
    }

    #[test]
    fn m1_forced_examples() {
        let sym = OutputBox::symmetric_unit(1);
        // 0.5^t ≤ 0.1/1.9 first at t = 5
        assert_eq!(bound_m1_forced(&scalar(0.5), &sym, 0.1).unwrap().m, 4);
        assert_eq!(bound_m1_forced(&scalar(0.2), &sym, 0.5).unwrap().m, 0);
        assert_eq!(
            bound_m1_forced(&scalar(0.5), &sym, 1.0).unwrap().m,
            bound_m1_unforced(&scalar(0.5), &sym).unwrap().m
        );
        assert!(bound_m1_forced(&scalar(0.5), &sym, 0.0).is_err());
    }

    #[test]
    fn unstable_refused() {
        let sym = OutputBox::symmetric_unit(1);
        assert!(matches!(bound_m1_unforced(&scalar(1.0), &sym), Err(Error::Unstable { .. })));
        assert!(matches!(bound_m1_forced(&scalar(-1.2), &sym, 0.5), Err(Error::Unstable { .. })));
    }

    #[test]
    fn iteration_cap_reported() {
        let sym = OutputBox::symmetric_unit(1);
        let config = PowerSeriesConfig { iteration_cap: 3, ..Default::default() };
        let err = bound_m1_forced_with(&scalar(0.99), &sym, 0.01, &config).unwrap_err();
        assert!(matches!(err, Error::IterationCap { cap: 3, .. }));
    }

    #[test]
    fn safety_margin_only_tightens() {
        let sym = OutputBox::symmetric_unit(1);
        let a = Matrix::from_rows(&[[0.0, 1.0], [-0.25, 1.0]]).unwrap();
        let sys = LtiSystem::new(a, Matrix::row_vector(&[1.0, 0.0])).unwrap();
        let config = PowerSeriesConfig { safety_margin: 1e-9, ..Default::default() };
        // the exact tie at t = 3 no longer counts
        assert_eq!(bound_m1_unforced_with(&sys, &sym, &config).unwrap().m, 3);
    }
}
