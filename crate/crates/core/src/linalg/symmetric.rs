//! Cyclic Jacobi for symmetric eigenproblems and one-sided Jacobi for
//! singular values.

use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and the matching orthonormal eigenvectors
/// (as columns) of a symmetric matrix.
pub fn sym_eigen(p: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    check_symmetric(p, 1e-10)?;
    let n = p.rows();
    let mut a = p.symmetrized();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();
    if n <= 1 || scale == 0.0 {
        return Ok((a.diag(), v));
    }
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale * 1e-2 {
            converged = true;
            break;
        }
        for pi in 0..n - 1 {
            for qi in pi + 1..n {
                let apq = a[(pi, qi)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[(pi, pi)];
                let aqq = a[(qi, qi)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, pi)];
                    let akq = a[(k, qi)];
                    a[(k, pi)] = c * akp - s * akq;
                    a[(k, qi)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(pi, k)];
                    let aqk = a[(qi, k)];
                    a[(pi, k)] = c * apk - s * aqk;
                    a[(qi, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, pi)];
                    let vkq = v[(k, qi)];
                    v[(k, pi)] = c * vkp - s * vkq;
                    v[(k, qi)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        // a last check: sweeps stall only when the off-diagonal is at rounding level
        let off = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(0.0f64, |m, (i, j)| m.max(a[(i, j)].abs()));
        if off > 1e-12 * scale {
            return Err(Error::NoConvergence { routine: "Jacobi eigen", iterations: MAX_SWEEPS });
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let d = a.diag();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    Ok((values, vectors))
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn sym_eig_extremes(p: &Matrix) -> Result<(f64, f64)> {
    let (values, _) = sym_eigen(p)?;
    match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Err(Error::InvalidArgument("empty matrix has no eigenvalues".into())),
    }
}

fn check_symmetric(p: &Matrix, tol: f64) -> Result<()> {
    if !p.is_square() {
        return Err(Error::NotSquare { rows: p.rows(), cols: p.cols() });
    }
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    let asym = p.asymmetry();
    if asym > tol * p.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Singular values, descending.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let work = if m.rows() >= m.cols() { m.clone() } else { m.transpose() };
    let (rows, cols) = work.shape();
    if cols == 0 {
        return Vec::new();
    }
    // columns as contiguous vectors
    let mut u: Vec<Vec<f64>> = (0..cols).map(|j| work.col(j)).collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols.saturating_sub(1) {
            for q in p + 1..cols {
                let alpha: f64 = u[p].iter().map(|x| x * x).sum();
                let beta: f64 = u[q].iter().map(|x| x * x).sum();
                let gamma: f64 = u[p].iter().zip(&u[q]).map(|(a, b)| a * b).sum();
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let up = u[p][k];
                    let uq = u[q][k];
                    u[p][k] = c * up - s * uq;
                    u[q][k] = s * up + c * uq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = u.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Smallest singular value; zero for an empty matrix.
pub fn min_singular_value(m: &Matrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Ratio of the extreme singular values.
pub fn condition_number(m: &Matrix) -> f64 {
    let sv = singular_values(m);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}
