//! Dense two-phase simplex for `max cᵀx s.t. Gx ≤ h` with free `x`.
//!
//! Free variables are split as `x = x⁺ − x⁻`; rows with a negative right-hand
//! side get an artificial variable for phase one. Entering columns follow the
//! largest reduced cost until a run of degenerate pivots is seen, after which
//! Bland's smallest-index rule takes over for the rest of the phase.

use super::Polytope;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};
use crate::tol::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub optimum: Option<f64>,
    pub argmax: Option<Vec<f64>>,
    /// Nonnegative multipliers with `Gᵀy = c` at the optimum, one per inequality.
    pub duals: Option<Vec<f64>>,
}

impl LpOutcome {
    fn unbounded() -> Self {
        Self { status: LpStatus::Unbounded, optimum: None, argmax: None, duals: None }
    }
    fn infeasible() -> Self {
        Self { status: LpStatus::Infeasible, optimum: None, argmax: None, duals: None }
    }
}

struct Tableau {
    width: usize,
    data: Vec<f64>,
    basis: Vec<usize>,
    alive: Vec<bool>,
    obj: Vec<f64>,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let piv = self.data[r * w + c];
        for j in 0..w {
            self.data[r * w + j] /= piv;
        }
        self.data[r * w + c] = 1.0;
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for chunk in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = chunk[c];
            if f != 0.0 {
                for (x, p) in chunk.iter_mut().zip(prow.iter()) {
                    *x -= f * p;
                }
                chunk[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (x, p) in self.obj.iter_mut().zip(prow.iter()) {
                *x -= f * p;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Recomputes `obj = cost − Σ cost_B(i) · row_i` for the given column costs.
    fn set_objective(&mut self, cost: &[f64]) {
        let w = self.width;
        let mut obj = vec![0.0; w];
        obj[..cost.len()].copy_from_slice(cost);
        for (i, &b) in self.basis.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            let cb = cost.get(b).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for j in 0..w {
                    obj[j] -= cb * self.data[i * w + j];
                }
            }
        }
        self.obj = obj;
    }

    /// Maximises the current objective over columns `< allowed`.
    fn optimize(&mut self, allowed: usize, tol: &Tolerances, max_pivots: usize) -> Result<bool> {
        let rhs = self.rhs_col();
        let m = self.basis.len();
        let mut degenerate_run = 0usize;
        let mut bland = false;
        for _ in 0..max_pivots {
            let entering = if bland {
                (0..allowed).find(|&j| self.obj[j] > tol.feasibility)
            } else {
                (0..allowed)
                    .filter(|&j| self.obj[j] > tol.feasibility)
                    .max_by(|&a, &b| self.obj[a].total_cmp(&self.obj[b]))
            };
            let Some(col) = entering else { return Ok(true) };

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                if !self.alive[i] {
                    continue;
                }
                let a = self.at(i, col);
                if a > tol.pivot {
                    let ratio = self.at(i, rhs).max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12 * (1.0 + br)
                                || (ratio <= br + 1e-12 * (1.0 + br) && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            let Some((row, ratio)) = leave else { return Ok(false) };
            // a step whose objective gain is lost in rounding counts as degenerate
            if ratio * self.obj[col] <= 1e-11 * (1.0 + self.obj[rhs].abs()) {
                degenerate_run += 1;
                if degenerate_run > 2 * m + 10 {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col);
        }
        Err(Error::Cycling { pivots: max_pivots })
    }
}

/// Maximises `cᵀx` over `p` with default tolerances.
pub fn lp_maximize(c: &[f64], p: &Polytope) -> Result<LpOutcome> {
    lp_maximize_with(c, p, &Tolerances::default())
}

pub fn lp_maximize_with(c: &[f64], p: &Polytope, tol: &Tolerances) -> Result<LpOutcome> {
    let d = p.dim();
    if c.len() != d {
        return Err(Error::Dimension {
            context: "lp_maximize",
            detail: format!("objective of length {} in dimension {d}", c.len()),
        });
    }
    // normalise rows; constant rows are checked directly
    struct Row {
        g: Vec<f64>,
        h: f64,
        orig: usize,
        scale: f64,
    }
    let mut rows = Vec::with_capacity(p.len());
    for (i, (g, h)) in p.rows().enumerate() {
        let nrm = norm2(g);
        if nrm < tol.zero_row {
            if h < -tol.feasibility {
                return Ok(LpOutcome::infeasible());
            }
            continue;
        }
        rows.push(Row { g: g.iter().map(|v| v / nrm).collect(), h: h / nrm, orig: i, scale: nrm });
    }
    let cscale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cn: Vec<f64> = if cscale > 0.0 { c.iter().map(|v| v / cscale).collect() } else { vec![0.0; d] };

    let m = rows.len();
    if m == 0 {
        return Ok(if cscale == 0.0 {
            LpOutcome {
                status: LpStatus::Optimal,
                optimum: Some(0.0),
                argmax: Some(vec![0.0; d]),
                duals: Some(vec![0.0; p.len()]),
            }
        } else {
            LpOutcome::unbounded()
        });
    }

    let n_art = rows.iter().filter(|r| r.h < 0.0).count();
    let slack0 = 2 * d;
    let art0 = slack0 + m;
    let ncols = art0 + n_art;
    let width = ncols + 1;
    let mut data = vec![0.0; m * width];
    let mut basis = vec![0usize; m];
    let mut next_art = art0;
    for (i, r) in rows.iter().enumerate() {
        let sign = if r.h < 0.0 { -1.0 } else { 1.0 };
        let base = i * width;
        for j in 0..d {
            data[base + j] = sign * r.g[j];
            data[base + d + j] = -sign * r.g[j];
        }
        data[base + slack0 + i] = sign;
        data[base + ncols] = sign * r.h;
        if r.h < 0.0 {
            data[base + next_art] = 1.0;
            basis[i] = next_art;
            next_art += 1;
        } else {
            basis[i] = slack0 + i;
        }
    }
    let mut t = Tableau { width, data, basis, alive: vec![true; m], obj: vec![0.0; width] };
    let max_pivots = 200 * (m + ncols) + 1000;
    let hscale = rows.iter().fold(1.0f64, |a, r| a.max(r.h.abs()));

    if n_art > 0 {
        let mut cost = vec![0.0; ncols];
        for j in art0..ncols {
            cost[j] = -1.0;
        }
        t.set_objective(&cost);
        t.optimize(ncols, tol, max_pivots)?;
        // obj[rhs] = −z = Σ artificials
        if t.obj[ncols] > tol.feasibility * hscale * (m as f64).sqrt() {
            return Ok(LpOutcome::infeasible());
        }
        for i in 0..m {
            if t.basis[i] >= art0 {
                let col = (0..art0)
                    .filter(|&j| t.at(i, j).abs() > tol.pivot)
                    .max_by(|&a, &b| t.at(i, a).abs().total_cmp(&t.at(i, b).abs()));
                match col {
                    Some(j) => t.pivot(i, j),
                    None => t.alive[i] = false,
                }
            }
        }
    }

    let mut cost = vec![0.0; ncols];
    for j in 0..d {
        cost[j] = cn[j];
        cost[d + j] = -cn[j];
    }
    t.set_objective(&cost);
    if !t.optimize(art0, tol, max_pivots)? {
        return Ok(LpOutcome::unbounded());
    }

    let mut x = vec![0.0; d];
    for (i, &b) in t.basis.iter().enumerate() {
        if !t.alive[i] {
            continue;
        }
        let v = t.at(i, ncols);
        if b < d {
            x[b] += v;
        } else if b < 2 * d {
            x[b - d] -= v;
        }
    }
    let mut duals = vec![0.0; p.len()];
    for (k, r) in rows.iter().enumerate() {
        let y = (-t.obj[slack0 + k]).max(0.0);
        duals[r.orig] = y * cscale / r.scale;
    }
    let optimum = dot(c, &x);
    Ok(LpOutcome { status: LpStatus::Optimal, optimum: Some(optimum), argmax: Some(x), duals: Some(duals) })
}

/// Whether `rowᵀx ≤ rhs` holds on all of `p`, certified by an LP maximum.
pub fn is_redundant(row: &[f64], rhs: f64, p: &Polytope) -> Result<bool> {
    is_redundant_with(row, rhs, p, &Tolerances::default())
}

pub fn is_redundant_with(row: &[f64], rhs: f64, p: &Polytope, tol: &Tolerances) -> Result<bool> {
    if norm2(row) < tol.zero_row {
        return Ok(rhs >= -tol.redundancy);
    }
    let out = lp_maximize_with(row, p, tol)?;
    match out.status {
        LpStatus::Optimal => Ok(out.optimum.expect("optimal outcome carries a value") <= rhs + tol.redundancy),
        LpStatus::Unbounded => Ok(false),
        LpStatus::Infeasible => Err(Error::Infeasible),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(d: usize) -> Polytope {
        Polytope::from_box(&vec![-1.0; d], &vec![1.0; d]).unwrap()
    }

    #[test]
    fn box_maximum() {
        let out = lp_maximize(&[1.0, 0.0], &unit_box(2)).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!((out.optimum.unwrap() - 1.0).abs() < 1e-12);
        assert!((out.argmax.unwrap()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_line_is_unbounded() {
        let mut p = Polytope::new(1);
        p.push(vec![-1.0], 0.0).unwrap();
        assert_eq!(lp_maximize(&[1.0], &p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn empty_interval_is_infeasible() {
        let mut p = Polytope::new(1);
        p.push(vec![1.0], 1.0).unwrap();
        p.push(vec![-1.0], -2.0).unwrap();
        assert_eq!(lp_maximize(&[1.0], &p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn phase_one_finds_offset_region() {
        // 2 ≤ x ≤ 3, 1 ≤ y ≤ 4: max x + y = 7
        let p = Polytope::from_box(&[2.0, 1.0], &[3.0, 4.0]).unwrap();
        let out = lp_maximize(&[1.0, 1.0], &p).unwrap();
        assert!((out.optimum.unwrap() - 7.0).abs() < 1e-10);
        let out = lp_maximize(&[-1.0, -1.0], &p).unwrap();
        assert!((out.optimum.unwrap() + 3.0).abs() < 1e-10);
    }

    #[test]
    fn duals_certify_optimum() {
        let mut p = unit_box(2);
        p.push(vec![1.0, 1.0], 1.0).unwrap();
        let c = [2.0, 1.0];
        let out = lp_maximize(&c, &p).unwrap();
        let y = out.duals.unwrap();
        let g = p.g();
        for j in 0..2 {
            let s: f64 = (0..p.len()).map(|i| y[i] * g[(i, j)]).sum();
            assert!((s - c[j]).abs() < 1e-9);
        }
        let hy: f64 = y.iter().zip(p.h()).map(|(a, b)| a * b).sum();
        assert!((hy - out.optimum.unwrap()).abs() < 1e-9);
    }

    #[test]
    fn redundancy_examples() {
        let b = unit_box(2);
        assert!(is_redundant(&[1.0, 0.0], 2.0, &b).unwrap());
        assert!(!is_redundant(&[1.0, 0.0], 0.5, &b).unwrap());
        assert!(is_redundant(&[0.0, 1.0], 1.0, &b).unwrap());
    }

    #[test]
    fn redundancy_against_unbounded_set() {
        let mut strip = Polytope::new(2);
        strip.push(vec![1.0, 0.0], 1.0).unwrap();
        strip.push(vec![-1.0, 0.0], 1.0).unwrap();
        assert!(!is_redundant(&[0.0, 1.0], 5.0, &strip).unwrap());
        assert!(is_redundant(&[1.0, 0.0], 1.0, &strip).unwrap());
    }

    #[test]
    fn zero_row_handling() {
        let b = unit_box(1);
        assert!(is_redundant(&[0.0], 0.0, &b).unwrap());
        assert!(!is_redundant(&[0.0], -1.0, &b).unwrap());
    }

    #[test]
    fn degenerate_vertex_does_not_cycle() {
        // many constraints through the optimal vertex (1, 1)
        let mut p = unit_box(2);
        for k in 1..20 {
            let a = k as f64 / 20.0;
            p.push(vec![a, 1.0 - a], 1.0).unwrap();
        }
        let out = lp_maximize(&[1.0, 1.0], &p).unwrap();
        assert!((out.optimum.unwrap() - 2.0).abs() < 1e-10);
    }
}
