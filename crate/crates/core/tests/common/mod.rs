//! Oracles shared by the integration tests. Nothing here calls the routines it
//! is used to check.
#![allow(dead_code)]

use masbound::geometry::Polytope;
use masbound::linalg::Matrix;
use masbound::montecarlo::{random_stable_system, StudyConfig};
use masbound::{LtiSystem, OutputBox};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_na(m: &DMatrix<f64>) -> Matrix {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
    Matrix::from_rows(&rows).unwrap()
}

/// Spectral radius from nalgebra's Schur decomposition.
pub fn na_spectral_radius(m: &Matrix) -> f64 {
    to_na(m).complex_eigenvalues().iter().fold(0.0f64, |r, z| r.max(z.norm()))
}

/// Random matrix rescaled to the given spectral radius.
pub fn random_with_radius(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Matrix {
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let rho = m.complex_eigenvalues().iter().fold(0.0f64, |r, z| r.max(z.norm()));
    let scale = if rho > 1e-9 { radius / rho } else { 1.0 };
    from_na(&(m * scale))
}

/// Random single-output system with one input from the study generator.
pub fn random_system(seed: u64, order_max: usize) -> (LtiSystem, OutputBox) {
    let cfg = StudyConfig { order_max, ..StudyConfig::default() };
    random_stable_system(seed, &cfg).unwrap()
}

fn combinations(k: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == d {
        out.push(cur.clone());
        return;
    }
    for i in start..k {
        cur.push(i);
        combinations(k, d, i + 1, cur, out);
        cur.pop();
    }
}

/// All vertices found by solving every `d`-subset of rows as equalities.
pub fn brute_force_vertices(p: &Polytope, tol: f64) -> Vec<Vec<f64>> {
    let d = p.dim();
    let mut subsets = Vec::new();
    combinations(p.len(), d, 0, &mut Vec::new(), &mut subsets);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for idx in subsets {
        let g = DMatrix::from_fn(d, d, |i, j| p.row(idx[i])[j]);
        if g.clone().svd(false, false).singular_values.min() <= 1e-10 {
            continue;
        }
        let h = nalgebra::DVector::from_fn(d, |i, _| p.rhs(idx[i]));
        let Some(x) = g.lu().solve(&h) else { continue };
        let x: Vec<f64> = x.iter().copied().collect();
        let feasible = p.rows().all(|(row, rhs)| row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() <= rhs + tol);
        if feasible && !out.iter().any(|v| dist(v, &x) < 1e-7) {
            out.push(x);
        }
    }
    out
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Every point of `a` has a partner in `b` within `tol`, and vice versa.
pub fn same_point_set(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|x| b.iter().any(|y| dist(x, y) <= tol))
        && b.iter().all(|y| a.iter().any(|x| dist(x, y) <= tol))
}

/// Bounded polytope: a random box around the origin cut by random halfspaces.
pub fn random_bounded_polytope(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Polytope {
    let lo: Vec<f64> = (0..d).map(|_| -rng.random_range(0.5..2.0)).collect();
    let hi: Vec<f64> = (0..d).map(|_| rng.random_range(0.5..2.0)).collect();
    let mut p = Polytope::from_box(&lo, &hi).unwrap();
    while p.len() < k {
        let row: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        p.push(row, rng.random_range(0.2..1.5)).unwrap();
    }
    p
}

/// `t*` of `x⁺ = ax`, `−y_l ≤ cx ≤ y_u` by intersecting intervals: the last
/// time step whose constraint strictly shrinks the running interval.
pub fn scalar_t_star(a: f64, c: f64, y_l: f64, y_u: f64) -> usize {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut last = 0;
    let mut g = c;
    let floor = y_l.min(y_u);
    for k in 0..100_000 {
        let (new_lo, new_hi) = if g > 0.0 {
            (lo.max(-y_l / g), hi.min(y_u / g))
        } else if g < 0.0 {
            (lo.max(y_u / g), hi.min(y_l / -g))
        } else {
            (lo, hi)
        };
        let shrink = |old: f64, new: f64| old.is_infinite() || (old - new).abs() > 1e-12 * (1.0 + old.abs());
        if shrink(lo, new_lo) || shrink(hi, new_hi) {
            last = k;
        }
        lo = new_lo;
        hi = new_hi;
        if k > 0 && g.abs() * lo.abs().max(hi.abs()) < floor * (1.0 - 1e-9) {
            break;
        }
        g *= a;
    }
    last
}
