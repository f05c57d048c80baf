//! H-to-V conversion by the double-description method on the homogenised
//! cone `{(x, t) : Gx − ht ≤ 0, t ≥ 0}`.
//!
//! Extreme rays with `t > 0` are the vertices `x/t`; a surviving ray with
//! `t = 0` is a recession direction, so the polytope is unbounded. Adjacency
//! of rays is decided combinatorially: two rays span an edge iff no third ray
//! is active on every constraint active on both.

use super::Polytope;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Matrix};
use crate::tol::Tolerances;

/// Largest dimension accepted by [`enumerate_vertices`].
pub const DEFAULT_DIMENSION_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexConfig {
    pub dimension_cap: usize,
    pub active_tol: f64,
    pub merge_tol: f64,
}

impl Default for VertexConfig {
    fn default() -> Self {
        let tol = Tolerances::default();
        Self { dimension_cap: DEFAULT_DIMENSION_CAP, active_tol: tol.vertex_active, merge_tol: tol.vertex_merge }
    }
}

#[derive(Clone)]
struct Ray {
    y: Vec<f64>,
    zero: Bits,
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

fn normalize(y: &mut [f64]) {
    let n = norm2(y);
    if n > 0.0 {
        for v in y.iter_mut() {
            *v /= n;
        }
    }
}

/// Returns `p` with its vertex list filled in.
pub fn enumerate_vertices(p: &Polytope) -> Result<Polytope> {
    enumerate_vertices_with(p, &VertexConfig::default())
}

pub fn enumerate_vertices_with(p: &Polytope, config: &VertexConfig) -> Result<Polytope> {
    let d = p.dim();
    if d > config.dimension_cap {
        return Err(Error::DimensionCap { dim: d, cap: config.dimension_cap });
    }
    if d == 0 {
        return Err(Error::InvalidArgument("zero-dimensional polytope".into()));
    }
    let dc = d + 1;

    // cone rows [G_i, −h_i] normalised, then −t ≤ 0
    let mut cone: Vec<Vec<f64>> = Vec::with_capacity(p.len() + 1);
    for (g, h) in p.rows() {
        let mut r: Vec<f64> = g.iter().copied().chain(std::iter::once(-h)).collect();
        let gn = norm2(g);
        if gn < 1e-12 {
            if h < -config.active_tol {
                return Err(Error::Infeasible);
            }
            continue;
        }
        normalize(&mut r);
        cone.push(r);
    }
    let mut t_row = vec![0.0; dc];
    t_row[d] = -1.0;
    cone.push(t_row);
    let k = cone.len();

    // initial basis of d+1 independent rows, t ≥ 0 first
    let mut order: Vec<usize> = std::iter::once(k - 1).chain(0..k - 1).collect();
    let basis = independent_rows(&cone, &mut order, dc);
    if basis.len() < dc {
        // the cone has a lineality space: P contains a line or is empty
        return Err(Error::Unbounded);
    }
    let b = Matrix::from_rows(&basis.iter().map(|&i| cone[i].clone()).collect::<Vec<_>>())?;
    let binv = b.inverse().map_err(|_| Error::Numerical("initial cone basis is singular".into()))?;
    let mut rays: Vec<Ray> = (0..dc)
        .map(|j| {
            let mut y: Vec<f64> = (0..dc).map(|i| -binv[(i, j)]).collect();
            normalize(&mut y);
            let mut zero = Bits::new(k);
            for (pos, &row) in basis.iter().enumerate() {
                if pos != j {
                    zero.set(row);
                }
            }
            Ray { y, zero }
        })
        .collect();

    let in_basis: Vec<bool> = (0..k).map(|i| basis.contains(&i)).collect();
    for row_idx in order.into_iter().filter(|&i| !in_basis[i]) {
        let a = &cone[row_idx];
        let vals: Vec<f64> = rays.iter().map(|r| dot(a, &r.y)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (i, &v) in vals.iter().enumerate() {
            if v > config.active_tol {
                pos.push(i);
            } else if v < -config.active_tol {
                neg.push(i);
                next.push(rays[i].clone());
            } else {
                let mut r = rays[i].clone();
                r.zero.set(row_idx);
                next.push(r);
            }
        }
        if pos.is_empty() {
            rays = next;
            continue;
        }
        for &ip in &pos {
            for &ineg in &neg {
                let common = rays[ip].zero.and(&rays[ineg].zero);
                if common.count() + 1 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(r, ray)| r == ip || r == ineg || !common.subset_of(&ray.zero));
                if !adjacent {
                    continue;
                }
                let (sp, sn) = (vals[ip], vals[ineg]);
                let mut y: Vec<f64> = rays[ineg].y.iter().zip(&rays[ip].y).map(|(n, p)| sp * n - sn * p).collect();
                normalize(&mut y);
                let mut zero = common;
                zero.set(row_idx);
                next.push(Ray { y, zero });
            }
        }
        rays = next;
        if rays.is_empty() {
            return Err(Error::Infeasible);
        }
    }

    let mut verts: Vec<Vec<f64>> = Vec::new();
    let mut recession = false;
    for r in &rays {
        let t = r.y[d];
        if t > config.active_tol {
            let v: Vec<f64> = r.y[..d].iter().map(|x| x / t).collect();
            if !verts.iter().any(|w| dist(w, &v) <= config.merge_tol) {
                verts.push(v);
            }
        } else {
            recession = true;
        }
    }
    if verts.is_empty() {
        return Err(Error::Infeasible);
    }
    if recession {
        return Err(Error::Unbounded);
    }
    let mut out = p.clone();
    out.set_vertices(verts);
    Ok(out)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Greedily picks up to `dim` linearly independent rows in `order`.
fn independent_rows(rows: &[Vec<f64>], order: &mut [usize], dim: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut reduced: Vec<Vec<f64>> = Vec::new();
    for &i in order.iter() {
        let mut v = rows[i].clone();
        for basis_vec in &reduced {
            let proj = dot(&v, basis_vec);
            for (x, b) in v.iter_mut().zip(basis_vec) {
                *x -= proj * b;
            }
        }
        let n = norm2(&v);
        if n > 1e-9 {
            for x in v.iter_mut() {
                *x /= n;
            }
            reduced.push(v);
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
        for x in v.iter_mut() {
            for c in x.iter_mut() {
                *c = (*c * 1e9).round() / 1e9 + 0.0;
            }
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn unit_square() {
        let p = Polytope::from_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let v = enumerate_vertices(&p).unwrap().vertices().unwrap().to_vec();
        assert_eq!(sorted(v), vec![vec![-1.0, -1.0], vec![-1.0, 1.0], vec![1.0, -1.0], vec![1.0, 1.0]]);
    }

    #[test]
    fn simplex() {
        let mut p = Polytope::new(2);
        p.push(vec![-1.0, 0.0], 0.0).unwrap();
        p.push(vec![0.0, -1.0], 0.0).unwrap();
        p.push(vec![1.0, 1.0], 1.0).unwrap();
        let v = enumerate_vertices(&p).unwrap().vertices().unwrap().to_vec();
        assert_eq!(sorted(v), vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn cut_square_has_five_vertices() {
        let mut p = Polytope::from_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        p.push(vec![1.0, 1.0], 1.0).unwrap();
        let v = enumerate_vertices(&p).unwrap().vertices().unwrap().to_vec();
        assert_eq!(
            sorted(v),
            vec![vec![-1.0, -1.0], vec![-1.0, 1.0], vec![0.0, 1.0], vec![1.0, -1.0], vec![1.0, 0.0]]
        );
    }

    #[test]
    fn strip_is_unbounded() {
        let mut p = Polytope::new(2);
        p.push(vec![1.0, 0.0], 1.0).unwrap();
        p.push(vec![-1.0, 0.0], 1.0).unwrap();
        assert_eq!(enumerate_vertices(&p).unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn cone_is_unbounded() {
        let mut p = Polytope::new(2);
        p.push(vec![-1.0, 0.0], 0.0).unwrap();
        p.push(vec![0.0, -1.0], 0.0).unwrap();
        assert_eq!(enumerate_vertices(&p).unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn empty_is_infeasible() {
        let mut p = Polytope::from_box(&[-1.0], &[1.0]).unwrap();
        p.push(vec![1.0], -2.0).unwrap();
        assert_eq!(enumerate_vertices(&p).unwrap_err(), Error::Infeasible);
    }

    #[test]
    fn flat_polytope() {
        // square in the plane z = 0 of R^3
        let mut p = Polytope::from_box(&[-1.0, -1.0, 0.0], &[1.0, 1.0, 0.0]).unwrap();
        p.push(vec![1.0, 1.0, 0.0], 10.0).unwrap();
        let v = enumerate_vertices(&p).unwrap().vertices().unwrap().to_vec();
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|x| x[2].abs() < 1e-12 && (x[0].abs() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn dimension_cap() {
        let p = Polytope::from_box(&[-1.0; 13], &[1.0; 13]).unwrap();
        assert_eq!(enumerate_vertices(&p).unwrap_err(), Error::DimensionCap { dim: 13, cap: 12 });
    }

    #[test]
    fn hypercube() {
        let p = Polytope::from_box(&[-1.0; 6], &[1.0; 6]).unwrap();
        let v = enumerate_vertices(&p).unwrap();
        assert_eq!(v.vertices().unwrap().len(), 64);
    }
}
