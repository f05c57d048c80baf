use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};

/// The set `{x : Gx ≤ h}` with an optional vertex list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    vertices: Option<Vec<Vec<f64>>>,
}

impl Polytope {
    /// Empty inequality system in `dim` dimensions (the whole space).
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), rhs: Vec::new(), vertices: None }
    }

    pub fn from_h(g: &Matrix, h: &[f64]) -> Result<Self> {
        if g.rows() != h.len() {
            return Err(Error::Dimension {
                context: "Polytope::from_h",
                detail: format!("G has {} rows, h has {} entries", g.rows(), h.len()),
            });
        }
        let mut p = Self::new(g.cols());
        for i in 0..g.rows() {
            p.push(g.row(i).to_vec(), h[i])?;
        }
        Ok(p)
    }

    /// Axis-aligned box `lo ≤ x ≤ hi`.
    pub fn from_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::Dimension {
                context: "Polytope::from_box",
                detail: format!("{} lower and {} upper limits", lo.len(), hi.len()),
            });
        }
        let d = lo.len();
        let mut p = Self::new(d);
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            p.push(e.clone(), hi[i])?;
            e[i] = -1.0;
            p.push(e, -lo[i])?;
        }
        Ok(p)
    }

    /// Appends `rowᵀx ≤ rhs`; invalidates any cached vertex list.
    pub fn push(&mut self, row: Vec<f64>, rhs: f64) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::Dimension {
                context: "Polytope::push",
                detail: format!("row of length {} in dimension {}", row.len(), self.dim),
            });
        }
        if !rhs.is_finite() || row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.rows.push(row);
        self.rhs.push(rhs);
        self.vertices = None;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of inequalities.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rhs(&self, i: usize) -> f64 {
        self.rhs[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.rows.iter().map(Vec::as_slice).zip(self.rhs.iter().copied())
    }

    /// `G` as a matrix.
    pub fn g(&self) -> Matrix {
        let data = self.rows.iter().flatten().copied().collect();
        Matrix::from_row_major(self.rows.len(), self.dim, data).expect("rows share the dimension")
    }

    pub fn h(&self) -> &[f64] {
        &self.rhs
    }

    pub fn vertices(&self) -> Option<&[Vec<f64>]> {
        self.vertices.as_deref()
    }

    pub(crate) fn set_vertices(&mut self, v: Vec<Vec<f64>>) {
        self.vertices = Some(v);
    }

    /// Copy without inequality `i`.
    pub fn without_row(&self, i: usize) -> Self {
        let mut p = self.clone();
        p.rows.remove(i);
        p.rhs.remove(i);
        p.vertices = None;
        p
    }

    /// Keeps only the rows whose index satisfies `keep`.
    pub fn retain_rows(&mut self, mut keep: impl FnMut(usize) -> bool) {
        let mut idx = 0;
        let mut k = 0;
        while idx < self.rows.len() {
            if keep(k) {
                idx += 1;
            } else {
                self.rows.remove(idx);
                self.rhs.remove(idx);
            }
            k += 1;
        }
        self.vertices = None;
    }

    /// Largest violation `max_i (G_i x − h_i)`, or −∞ with no rows.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.rows().map(|(g, h)| dot(g, x) - h).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.dim && self.max_violation(x) <= tol
    }

    /// Indices of the inequalities active at `x` within `tol`.
    pub fn active_set(&self, x: &[f64], tol: f64) -> Vec<usize> {
        self.rows()
            .enumerate()
            .filter(|(_, (g, h))| (dot(g, x) - h).abs() <= tol * (1.0 + h.abs()))
            .map(|(i, _)| i)
            .collect()
    }

    /// Renders the H-representation as CSV lines `g₁,…,g_d,h`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (g, h) in self.rows() {
            let fields: Vec<String> = g.iter().chain(std::iter::once(&h)).map(|v| format!("{v:?}")).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses CSV produced by [`Polytope::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let values: std::result::Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
            let values =
                values.map_err(|e| Error::InvalidArgument(format!("polytope CSV line {}: {e}", lineno + 1)))?;
            if values.len() < 2 {
                return Err(Error::InvalidArgument(format!("polytope CSV line {}: too few fields", lineno + 1)));
            }
            rows.push(values);
        }
        let dim = rows.first().map_or(0, |r| r.len() - 1);
        let mut p = Self::new(dim);
        for mut r in rows {
            let h = r.pop().expect("checked length");
            p.push(r, h)?;
        }
        Ok(p)
    }
}
