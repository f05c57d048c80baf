//! Output-constraint rows of the admissible sets, one time step at a time.
//!
//! Unforced rows live in `x`-space: `C_jAᵗx ≤ y_jᵘ` and `−C_jAᵗx ≤ y_jˡ`.
//! Forced rows live in `(z, u)`-space, where `z = x − (I − A)⁻¹Bu`, so that
//! `y(t) = CAᵗz + H₀u`. The forced set also carries the tightened
//! steady-state rows `±H₀_ju ≤ (1 − ε)·limit`.

use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::linalg::Matrix;
use crate::model::{dc_gain, LtiSystem, OutputBox};
use crate::power_series::check_epsilon;

/// Produces the `2q` output rows for `t = 0, 1, 2, …`.
#[derive(Debug, Clone)]
pub struct OutputRows {
    a: Matrix,
    cat: Matrix,
    h0: Option<Matrix>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    t: usize,
}

impl OutputRows {
    pub fn unforced(sys: &LtiSystem, bx: &OutputBox) -> Result<Self> {
        check_box(sys, bx)?;
        Ok(Self {
            a: sys.a().clone(),
            cat: sys.c().clone(),
            h0: None,
            lower: bx.lower().to_vec(),
            upper: bx.upper().to_vec(),
            t: 0,
        })
    }

    pub fn forced(sys: &LtiSystem, bx: &OutputBox) -> Result<Self> {
        check_box(sys, bx)?;
        let h0 = dc_gain(sys)?;
        Ok(Self { h0: Some(h0), ..Self::unforced(sys, bx)? })
    }

    /// Dimension of the decision variable.
    pub fn dim(&self) -> usize {
        self.a.rows() + self.h0.as_ref().map_or(0, Matrix::cols)
    }

    /// Time index of the rows returned by the next call to [`OutputRows::current`].
    pub fn t(&self) -> usize {
        self.t
    }

    /// Rows for the current time index, upper limit then lower limit per output.
    pub fn current(&self) -> Vec<(Vec<f64>, f64)> {
        let mut out = Vec::with_capacity(2 * self.cat.rows());
        for j in 0..self.cat.rows() {
            let mut row = self.cat.row(j).to_vec();
            if let Some(h0) = &self.h0 {
                row.extend_from_slice(h0.row(j));
            }
            let neg: Vec<f64> = row.iter().map(|v| -v).collect();
            out.push((row, self.upper[j]));
            out.push((neg, self.lower[j]));
        }
        out
    }

    pub fn advance(&mut self) {
        self.cat = &self.cat * &self.a;
        self.t += 1;
    }

    /// Tightened steady-state rows `±H₀_ju ≤ (1 − ε)·limit`; empty when unforced.
    pub fn steady_state(&self, epsilon: f64) -> Vec<(Vec<f64>, f64)> {
        let Some(h0) = &self.h0 else { return Vec::new() };
        let n = self.a.rows();
        let mut out = Vec::with_capacity(2 * h0.rows());
        for j in 0..h0.rows() {
            let mut row = vec![0.0; n];
            row.extend_from_slice(h0.row(j));
            let neg: Vec<f64> = row.iter().map(|v| -v).collect();
            out.push((row, (1.0 - epsilon) * self.upper[j]));
            out.push((neg, (1.0 - epsilon) * self.lower[j]));
        }
        out
    }
}

fn check_box(sys: &LtiSystem, bx: &OutputBox) -> Result<()> {
    if bx.len() != sys.outputs() {
        return Err(Error::Dimension {
            context: "output constraints",
            detail: format!("box has {} outputs, system has {}", bx.len(), sys.outputs()),
        });
    }
    Ok(())
}

/// `O_T`: output rows for `t = 0, …, T` in `x`-space.
pub fn build_o_prefix(sys: &LtiSystem, bx: &OutputBox, horizon: usize) -> Result<Polytope> {
    let gen = OutputRows::unforced(sys, bx)?;
    stack(gen, Vec::new(), horizon)
}

/// `Õ_T` in `(z, u)`-space: steady-state rows followed by output rows for `t = 0, …, T`.
pub fn build_o_prefix_forced(sys: &LtiSystem, bx: &OutputBox, epsilon: f64, horizon: usize) -> Result<Polytope> {
    check_epsilon(epsilon)?;
    let gen = OutputRows::forced(sys, bx)?;
    let steady = gen.steady_state(epsilon);
    stack(gen, steady, horizon)
}

fn stack(mut gen: OutputRows, first: Vec<(Vec<f64>, f64)>, horizon: usize) -> Result<Polytope> {
    let mut p = Polytope::new(gen.dim());
    for (row, rhs) in first {
        p.push(row, rhs)?;
    }
    for _ in 0..=horizon {
        for (row, rhs) in gen.current() {
            p.push(row, rhs)?;
        }
        gen.advance();
    }
    Ok(p)
}
