//! General real eigenvalues: Householder reduction to upper Hessenberg form
//! followed by the Francis double-shift QR iteration.

use num_complex::Complex64;

use super::Matrix;
use crate::error::{Error, Result};

/// Eigenvalues of a square matrix with their largest modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub spectral_radius: f64,
}

impl Spectrum {
    fn new(eigenvalues: Vec<Complex64>) -> Self {
        let spectral_radius = eigenvalues.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        Self { eigenvalues, spectral_radius }
    }
}

const MAX_ITERATIONS_PER_EIGENVALUE: usize = 60;

/// All eigenvalues of `m`, with multiplicity.
pub fn eigenvalues(m: &Matrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Spectrum::new(Vec::new()));
    }
    let mut h = hessenberg(m);
    let values = hqr(&mut h)?;
    Ok(Spectrum::new(values))
}

/// Maximum eigenvalue modulus.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    Ok(eigenvalues(m)?.spectral_radius)
}

/// Orthogonally similar upper Hessenberg matrix.
pub(crate) fn hessenberg(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut a = m.clone();
    if n < 3 {
        return a;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let alpha: f64 = (k + 1..n).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let sign = if x0 >= 0.0 { 1.0 } else { -1.0 };
        for i in 0..n {
            v[i] = 0.0;
        }
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] += sign * alpha;
        let vnorm2: f64 = v[k + 1..].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // A <- (I - beta v vᵀ) A
        for j in 0..n {
            let s: f64 = (k + 1..n).map(|i| v[i] * a[(i, j)]).sum::<f64>() * beta;
            for i in k + 1..n {
                a[(i, j)] -= s * v[i];
            }
        }
        // A <- A (I - beta v vᵀ)
        for i in 0..n {
            let s: f64 = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum::<f64>() * beta;
            for j in k + 1..n {
                a[(i, j)] -= s * v[j];
            }
        }
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
    a
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
fn hqr(a: &mut Matrix) -> Result<Vec<Complex64>> {
    let n = a.rows();
    let eps = f64::EPSILON;
    let mut wr = vec![Complex64::new(0.0, 0.0); n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nnu = nn as usize;
            // look for a single small subdiagonal element
            let mut l = nnu;
            while l > 0 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nnu, nnu)];
            if l == nnu {
                wr[nnu] = Complex64::new(x + t, 0.0);
                nn -= 1;
            } else {
                let mut y = a[(nnu - 1, nnu - 1)];
                let mut w = a[(nnu, nnu - 1)] * a[(nnu - 1, nnu)];
                if l == nnu - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nnu - 1] = Complex64::new(x + z, 0.0);
                        wr[nnu] = Complex64::new(x + z, 0.0);
                        if z != 0.0 {
                            wr[nnu] = Complex64::new(x - w / z, 0.0);
                        }
                    } else {
                        wr[nnu] = Complex64::new(x + p, -z);
                        wr[nnu - 1] = Complex64::new(x + p, z);
                    }
                    nn -= 2;
                } else {
                    if its == MAX_ITERATIONS_PER_EIGENVALUE {
                        return Err(Error::NoConvergence {
                            routine: "Hessenberg QR",
                            iterations: its,
                        });
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t += x;
                        for i in 0..=nnu {
                            a[(i, i)] -= x;
                        }
                        let s = a[(nnu, nnu - 1)].abs() + a[(nnu - 1, nnu - 2)].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let (mut p, mut q, mut r);
                    let mut m = nnu - 2;
                    loop {
                        let z = a[(m, m)];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a[(m + 1, m)] + a[(m, m + 1)];
                        q = a[(m + 1, m + 1)] - z - rr - ss;
                        r = a[(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                        if u <= eps * v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m..nnu - 1 {
                        a[(i + 2, i)] = 0.0;
                        if i != m {
                            a[(i + 2, i - 1)] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nnu {
                        if k != m {
                            p = a[(k, k - 1)];
                            q = a[(k + 1, k - 1)];
                            r = 0.0;
                            if k + 1 != nnu {
                                r = a[(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[(k, k - 1)] = -a[(k, k - 1)];
                                }
                            } else {
                                a[(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            let z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nnu {
                                let mut pp = a[(k, j)] + q * a[(k + 1, j)];
                                if k + 1 != nnu {
                                    pp += r * a[(k + 2, j)];
                                    a[(k + 2, j)] -= pp * z;
                                }
                                a[(k + 1, j)] -= pp * y;
                                a[(k, j)] -= pp * x;
                            }
                            let mmin = if nnu < k + 3 { nnu } else { k + 3 };
                            for i in l..=mmin {
                                let mut pp = x * a[(i, k)] + y * a[(i, k + 1)];
                                if k + 1 != nnu {
                                    pp += z * a[(i, k + 2)];
                                    a[(i, k + 2)] -= pp * r;
                                }
                                a[(i, k + 1)] -= pp * q;
                                a[(i, k)] -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 0 || l as isize >= nn - 1 {
                break;
            }
        }
    }
    Ok(wr)
}
