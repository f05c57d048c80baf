//! System and constraint data model.
//!
//! An [`LtiSystem`] is either unforced (`x⁺ = Ax`, `y = Cx`) or driven by a
//! constant input (`x⁺ = Ax + Bu`, `y = Cx + Du`). The output constraint is a
//! box `−y_lower ≤ y ≤ y_upper` with strictly positive limits, so the origin
//! is interior.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, min_singular_value, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct LtiSystem {
    a: Matrix,
    b: Option<Matrix>,
    c: Matrix,
    d: Option<Matrix>,
}

impl LtiSystem {
    /// Unforced system.
    pub fn new(a: Matrix, c: Matrix) -> Result<Self> {
        Self::build(a, None, c, None)
    }

    /// System with a constant input; `d = None` means a zero feedthrough.
    pub fn with_input(a: Matrix, b: Matrix, c: Matrix, d: Option<Matrix>) -> Result<Self> {
        Self::build(a, Some(b), c, d)
    }

    fn build(a: Matrix, b: Option<Matrix>, c: Matrix, d: Option<Matrix>) -> Result<Self> {
        let n = a.rows();
        if !a.is_square() || n == 0 {
            return Err(Error::Dimension {
                context: "LtiSystem",
                detail: format!("A must be square and non-empty, got {}x{}", a.rows(), a.cols()),
            });
        }
        if c.cols() != n || c.rows() == 0 {
            return Err(Error::Dimension {
                context: "LtiSystem",
                detail: format!("C is {}x{}, expected q x {n} with q >= 1", c.rows(), c.cols()),
            });
        }
        let d = match (&b, d) {
            (None, Some(_)) => {
                return Err(Error::Dimension {
                    context: "LtiSystem",
                    detail: "D given without B".into(),
                })
            }
            (None, None) => None,
            (Some(b), d) => {
                if b.rows() != n || b.cols() == 0 {
                    return Err(Error::Dimension {
                        context: "LtiSystem",
                        detail: format!("B is {}x{}, expected {n} x m with m >= 1", b.rows(), b.cols()),
                    });
                }
                let d = d.unwrap_or_else(|| Matrix::zeros(c.rows(), b.cols()));
                if d.shape() != (c.rows(), b.cols()) {
                    return Err(Error::Dimension {
                        context: "LtiSystem",
                        detail: format!(
                            "D is {}x{}, expected {}x{}",
                            d.rows(),
                            d.cols(),
                            c.rows(),
                            b.cols()
                        ),
                    });
                }
                Some(d)
            }
        };
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }
    pub fn b(&self) -> Option<&Matrix> {
        self.b.as_ref()
    }
    pub fn c(&self) -> &Matrix {
        &self.c
    }
    pub fn d(&self) -> Option<&Matrix> {
        self.d.as_ref()
    }

    /// State dimension.
    pub fn order(&self) -> usize {
        self.a.rows()
    }
    /// Output dimension.
    pub fn outputs(&self) -> usize {
        self.c.rows()
    }
    /// Input dimension (zero for unforced systems).
    pub fn inputs(&self) -> usize {
        self.b.as_ref().map_or(0, Matrix::cols)
    }
    pub fn is_forced(&self) -> bool {
        self.b.is_some()
    }

    /// Same dynamics with the input channel removed.
    pub fn unforced(&self) -> Self {
        Self { a: self.a.clone(), b: None, c: self.c.clone(), d: None }
    }

    /// Stacked `[C; CA; …; CA^{n−1}]`.
    pub fn observability_matrix(&self) -> Matrix {
        let n = self.order();
        let mut blocks = Vec::with_capacity(n);
        let mut cak = self.c.clone();
        for _ in 0..n {
            let next = &cak * &self.a;
            blocks.push(cak);
            cak = next;
        }
        Matrix::vstack(&blocks).expect("blocks share a column count")
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        Ok(eigenvalues(&self.a)?.spectral_radius)
    }
}

/// Box output constraint `−y_lower ≤ y ≤ y_upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputBox {
    y_lower: Vec<f64>,
    y_upper: Vec<f64>,
}

impl OutputBox {
    pub fn new(y_lower: Vec<f64>, y_upper: Vec<f64>) -> Result<Self> {
        if y_lower.len() != y_upper.len() || y_lower.is_empty() {
            return Err(Error::InvalidBox(format!(
                "y_lower has {} entries and y_upper has {}",
                y_lower.len(),
                y_upper.len()
            )));
        }
        for (key, v) in [("y_lower", &y_lower), ("y_upper", &y_upper)] {
            if let Some(bad) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                return Err(Error::InvalidBox(format!("{key} entries must be positive, got {bad}")));
            }
        }
        Ok(Self { y_lower, y_upper })
    }

    /// The unit box `−1 ≤ y_j ≤ 1` for `q` outputs.
    pub fn symmetric_unit(q: usize) -> Self {
        Self { y_lower: vec![1.0; q], y_upper: vec![1.0; q] }
    }

    pub fn lower(&self) -> &[f64] {
        &self.y_lower
    }
    pub fn upper(&self) -> &[f64] {
        &self.y_upper
    }
    pub fn len(&self) -> usize {
        self.y_lower.len()
    }
    pub fn is_empty(&self) -> bool {
        self.y_lower.is_empty()
    }

    /// Both limits multiplied by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(
            self.y_lower.iter().map(|v| v * k).collect(),
            self.y_upper.iter().map(|v| v * k).collect(),
        )
    }

    /// Largest ratio between the two limits of any output.
    pub fn gamma(&self) -> f64 {
        gamma(self)
    }
}

/// `γ = max_j max(y_jᵘ/y_jˡ, y_jˡ/y_jᵘ)`.
pub fn gamma(bx: &OutputBox) -> f64 {
    bx.y_lower
        .iter()
        .zip(&bx.y_upper)
        .map(|(l, u)| (u / l).max(l / u))
        .fold(1.0, f64::max)
}

/// Rejection thresholds applied by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `stable` requires a spectral radius strictly below this.
    pub max_spectral_radius: f64,
    /// `observable` requires the smallest observability singular value to reach this.
    pub min_obsv_singular_value: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { max_spectral_radius: 0.999, min_obsv_singular_value: 1e-4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub spectral_radius: f64,
    pub min_obsv_singular_value: f64,
    pub stable: bool,
    pub observable: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.stable && self.observable
    }
}

/// Reports stability and observability of `(A, C)` against `thresholds`.
///
/// This only reports; the bound routines accept any system with ρ(A) < 1.
pub fn validate(sys: &LtiSystem, bx: &OutputBox, thresholds: &Thresholds) -> Result<ValidationReport> {
    if bx.len() != sys.outputs() {
        return Err(Error::Dimension {
            context: "validate",
            detail: format!("box has {} outputs, system has {}", bx.len(), sys.outputs()),
        });
    }
    let spectral_radius = sys.spectral_radius()?;
    let min_obsv = min_singular_value(&sys.observability_matrix());
    Ok(ValidationReport {
        spectral_radius,
        min_obsv_singular_value: min_obsv,
        stable: spectral_radius < thresholds.max_spectral_radius,
        observable: min_obsv >= thresholds.min_obsv_singular_value,
    })
}

fn require_stable_input(sys: &LtiSystem) -> Result<&Matrix> {
    let b = sys.b().ok_or(Error::Unforced)?;
    let rho = sys.spectral_radius()?;
    if rho >= 1.0 {
        return Err(Error::Unstable { spectral_radius: rho });
    }
    Ok(b)
}

/// `(I − A)⁻¹ B`.
fn equilibrium_gain(sys: &LtiSystem) -> Result<Matrix> {
    let b = require_stable_input(sys)?;
    let n = sys.order();
    let i_minus_a = &Matrix::identity(n) - sys.a();
    i_minus_a
        .solve(b)
        .map_err(|_| Error::Numerical("I - A is singular despite a stable A".into()))
}

/// DC gain `H₀ = C(I − A)⁻¹B + D`.
pub fn dc_gain(sys: &LtiSystem) -> Result<Matrix> {
    let x_gain = equilibrium_gain(sys)?;
    let d = sys.d().expect("forced systems always carry D");
    Ok(&(sys.c() * &x_gain) + d)
}

/// Equilibrium `(x_eq, y_eq) = ((I − A)⁻¹Bu, H₀u)` for a constant input `u`.
pub fn shift_to_equilibrium(sys: &LtiSystem, u: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let x_gain = equilibrium_gain(sys)?;
    if u.len() != sys.inputs() {
        return Err(Error::Dimension {
            context: "shift_to_equilibrium",
            detail: format!("u has {} entries, system has {} inputs", u.len(), sys.inputs()),
        });
    }
    let x_eq = x_gain.mul_vec(u)?;
    let h0 = dc_gain(sys)?;
    let y_eq = h0.mul_vec(u)?;
    Ok((x_eq, y_eq))
}

/// On-disk system description: row-major nested arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<f64>>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<Vec<f64>>>,
    pub y_lower: Vec<f64>,
    pub y_upper: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// A parsed and dimension-checked system description.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub system: LtiSystem,
    pub output_box: OutputBox,
    pub epsilon: Option<f64>,
}

fn keyed_matrix(key: &str, rows: &[Vec<f64>]) -> std::result::Result<Matrix, String> {
    if rows.is_empty() {
        return Err(format!("\"{key}\": matrix has no rows"));
    }
    Matrix::from_rows(rows).map_err(|e| format!("\"{key}\": {e}"))
}

impl SystemFile {
    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid system description: {e}"))
    }

    pub fn from_parts(sys: &LtiSystem, bx: &OutputBox, epsilon: Option<f64>) -> Self {
        let rows = |m: &Matrix| (0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>();
        Self {
            a: rows(sys.a()),
            b: sys.b().map(rows),
            c: rows(sys.c()),
            d: sys.d().map(rows),
            y_lower: bx.lower().to_vec(),
            y_upper: bx.upper().to_vec(),
            epsilon,
        }
    }

    /// Checks dimensions and limits; error messages name the offending key.
    pub fn into_spec(self) -> std::result::Result<SystemSpec, String> {
        let a = keyed_matrix("A", &self.a)?;
        if !a.is_square() {
            return Err(format!("\"A\": must be square, got {}x{}", a.rows(), a.cols()));
        }
        let n = a.rows();
        let c = keyed_matrix("C", &self.c)?;
        if c.cols() != n {
            return Err(format!("\"C\": expected {n} columns, got {}", c.cols()));
        }
        let q = c.rows();
        let b = self.b.as_deref().map(|r| keyed_matrix("B", r)).transpose()?;
        let d = self.d.as_deref().map(|r| keyed_matrix("D", r)).transpose()?;
        if let Some(b) = &b {
            if b.rows() != n {
                return Err(format!("\"B\": expected {n} rows, got {}", b.rows()));
            }
        }
        match (&b, &d) {
            (None, Some(_)) => return Err("\"D\": given without \"B\"".into()),
            (Some(b), Some(d)) if d.shape() != (q, b.cols()) => {
                return Err(format!(
                    "\"D\": expected {q}x{}, got {}x{}",
                    b.cols(),
                    d.rows(),
                    d.cols()
                ))
            }
            _ => {}
        }
        for (key, v) in [("y_lower", &self.y_lower), ("y_upper", &self.y_upper)] {
            if v.len() != q {
                return Err(format!("\"{key}\": expected {q} entries, got {}", v.len()));
            }
            if let Some(bad) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                return Err(format!("\"{key}\": limits must be positive, got {bad}"));
            }
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(format!("\"epsilon\": must lie in (0, 1], got {eps}"));
            }
        }
        let system = match b {
            Some(b) => LtiSystem::with_input(a, b, c, d),
            None => LtiSystem::new(a, c),
        }
        .map_err(|e| e.to_string())?;
        let output_box = OutputBox::new(self.y_lower, self.y_upper).map_err(|e| e.to_string())?;
        Ok(SystemSpec { system, output_box, epsilon: self.epsilon })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_system(a: f64, c: f64) -> LtiSystem {
        LtiSystem::new(Matrix::scalar(a), Matrix::scalar(c)).unwrap()
    }

    #[test]
    fn validate_examples() {
        let sym = OutputBox::symmetric_unit(1);
        let r = validate(&scalar_system(0.5, 1.0), &sym, &Thresholds::default()).unwrap();
        assert!((r.spectral_radius - 0.5).abs() < 1e-15);
        assert!((r.min_obsv_singular_value - 1.0).abs() < 1e-15);
        assert!(r.stable && r.observable);

        let sys = LtiSystem::new(Matrix::from_diag(&[0.5, 0.5]), Matrix::row_vector(&[1.0, 0.0])).unwrap();
        let r = validate(&sys, &sym, &Thresholds::default()).unwrap();
        assert!(r.stable && !r.observable);

        let r = validate(&scalar_system(1.0, 1.0), &sym, &Thresholds::default()).unwrap();
        assert!(!r.stable);
    }

    #[test]
    fn validate_checks_box_dimension() {
        let err = validate(&scalar_system(0.5, 1.0), &OutputBox::symmetric_unit(2), &Thresholds::default());
        assert!(matches!(err, Err(Error::Dimension { .. })));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(&OutputBox::new(vec![1.0], vec![1.0]).unwrap()), 1.0);
        assert_eq!(gamma(&OutputBox::new(vec![2.0, 1.0], vec![4.0, 1.0]).unwrap()), 2.0);
        assert!((gamma(&OutputBox::new(vec![0.1], vec![1.0]).unwrap()) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn box_rejects_nonpositive_limits() {
        assert!(OutputBox::new(vec![0.0], vec![1.0]).is_err());
        assert!(OutputBox::new(vec![1.0], vec![-1.0]).is_err());
        assert!(OutputBox::new(vec![1.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn dc_gain_examples() {
        let s = LtiSystem::with_input(Matrix::scalar(0.5), Matrix::scalar(1.0), Matrix::scalar(1.0), None).unwrap();
        assert!((dc_gain(&s).unwrap()[(0, 0)] - 2.0).abs() < 1e-15);

        let s = LtiSystem::with_input(
            Matrix::scalar(0.0),
            Matrix::scalar(1.0),
            Matrix::scalar(1.0),
            Some(Matrix::scalar(3.0)),
        )
        .unwrap();
        assert!((dc_gain(&s).unwrap()[(0, 0)] - 4.0).abs() < 1e-15);

        let s = LtiSystem::with_input(
            Matrix::from_diag(&[0.5, 0.0]),
            Matrix::column(&[1.0, 1.0]),
            Matrix::row_vector(&[1.0, 1.0]),
            None,
        )
        .unwrap();
        assert!((dc_gain(&s).unwrap()[(0, 0)] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn dc_gain_requires_input() {
        assert_eq!(dc_gain(&scalar_system(0.5, 1.0)), Err(Error::Unforced));
    }

    #[test]
    fn shift_examples() {
        let s = LtiSystem::with_input(Matrix::scalar(0.5), Matrix::scalar(1.0), Matrix::scalar(1.0), None).unwrap();
        let (x, y) = shift_to_equilibrium(&s, &[1.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-15 && (y[0] - 2.0).abs() < 1e-15);
        let (x, y) = shift_to_equilibrium(&s, &[0.0]).unwrap();
        assert_eq!((x[0], y[0]), (0.0, 0.0));

        let s = LtiSystem::with_input(Matrix::scalar(0.0), Matrix::scalar(2.0), Matrix::scalar(1.0), None).unwrap();
        let (x, y) = shift_to_equilibrium(&s, &[3.0]).unwrap();
        assert!((x[0] - 6.0).abs() < 1e-15 && (y[0] - 6.0).abs() < 1e-15);
    }

    #[test]
    fn d_without_b_rejected() {
        let f = SystemFile {
            a: vec![vec![0.5]],
            b: None,
            c: vec![vec![1.0]],
            d: Some(vec![vec![0.0]]),
            y_lower: vec![1.0],
            y_upper: vec![1.0],
            epsilon: None,
        };
        assert!(f.into_spec().unwrap_err().contains("\"D\""));
    }

    #[test]
    fn json_errors_name_the_key() {
        let bad_a = r#"{"A": [[0.5, 1.0]], "C": [[1.0]], "y_lower": [1], "y_upper": [1]}"#;
        let err = SystemFile::from_json(bad_a).unwrap().into_spec().unwrap_err();
        assert!(err.contains("\"A\""), "{err}");

        let bad_c = r#"{"A": [[0.5]], "C": [[1.0, 2.0]], "y_lower": [1], "y_upper": [1]}"#;
        let err = SystemFile::from_json(bad_c).unwrap().into_spec().unwrap_err();
        assert!(err.contains("\"C\""), "{err}");

        let bad_y = r#"{"A": [[0.5]], "C": [[1.0]], "y_lower": [0], "y_upper": [1]}"#;
        let err = SystemFile::from_json(bad_y).unwrap().into_spec().unwrap_err();
        assert!(err.contains("\"y_lower\""), "{err}");

        let bad_eps = r#"{"A": [[0.5]], "C": [[1.0]], "y_lower": [1], "y_upper": [1], "epsilon": 2}"#;
        let err = SystemFile::from_json(bad_eps).unwrap().into_spec().unwrap_err();
        assert!(err.contains("\"epsilon\""), "{err}");
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"A": [[0.5, 0.1], [0.0, 0.2]], "B": [[1], [0]], "C": [[1, 0]],
                       "y_lower": [0.5], "y_upper": [2], "epsilon": 0.1}"#;
        let spec = SystemFile::from_json(text).unwrap().into_spec().unwrap();
        assert_eq!(spec.system.order(), 2);
        assert_eq!(spec.system.inputs(), 1);
        assert_eq!(spec.system.d().unwrap(), &Matrix::zeros(1, 1));
        let back = SystemFile::from_parts(&spec.system, &spec.output_box, spec.epsilon);
        let again = back.into_spec().unwrap();
        assert_eq!(again, spec);
    }
}
