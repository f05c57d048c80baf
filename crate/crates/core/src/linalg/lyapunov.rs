use super::{eigenvalues, sym_eig_extremes, Matrix};
use crate::error::{Error, Result};

/// Solves `AᵀPA − P = −Q` for symmetric positive-definite `P`.
///
/// The unknown is vectorised column-wise, giving the n²×n² system
/// `(Aᵀ⊗Aᵀ − I) vec(P) = −vec(Q)`. Intended for the small orders found in
/// admissible-set work (n ≲ 10).
pub fn solve_discrete_lyapunov(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if q.shape() != (n, n) {
        return Err(Error::Dimension {
            context: "solve_discrete_lyapunov",
            detail: format!("Q is {}x{}, A is {n}x{n}", q.rows(), q.cols()),
        });
    }
    let (qmin, _) = sym_eig_extremes(q)?;
    if qmin <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: qmin });
    }
    let rho = eigenvalues(a)?.spectral_radius;
    if rho >= 1.0 {
        return Err(Error::Unstable { spectral_radius: rho });
    }

    let nn = n * n;
    // vec index of P(i, j) is j*n + i; (Aᵀ⊗Aᵀ)[(j*n+i), (l*n+k)] = A[l, j] A[k, i]
    let mut k_mat = Matrix::zeros(nn, nn);
    for j in 0..n {
        for i in 0..n {
            let row = j * n + i;
            for l in 0..n {
                let alj = a[(l, j)];
                if alj == 0.0 {
                    continue;
                }
                for k in 0..n {
                    k_mat[(row, l * n + k)] = alj * a[(k, i)];
                }
            }
            k_mat[(row, row)] -= 1.0;
        }
    }
    let rhs: Vec<f64> = (0..nn).map(|idx| -q[(idx % n, idx / n)]).collect();
    let mut vec_p = k_mat.solve_vec(&rhs)?;

    // one step of iterative refinement
    let resid = residual_vec(&k_mat, &vec_p, &rhs);
    if let Ok(corr) = k_mat.solve_vec(&resid) {
        for (p, c) in vec_p.iter_mut().zip(corr) {
            *p += c;
        }
    }

    let mut p = Matrix::zeros(n, n);
    for idx in 0..nn {
        p[(idx % n, idx / n)] = vec_p[idx];
    }
    let p = p.symmetrized();
    let res = lyapunov_residual(a, &p, q);
    if res > 1e-8 * q.frobenius_norm() {
        return Err(Error::Numerical(format!("Lyapunov residual {res:e} exceeds tolerance")));
    }
    Ok(p)
}

fn residual_vec(k: &Matrix, x: &[f64], b: &[f64]) -> Vec<f64> {
    let kx = k.mul_vec(x).expect("square system");
    b.iter().zip(kx).map(|(bi, ki)| bi - ki).collect()
}

/// ‖AᵀPA − P + Q‖_F.
pub fn lyapunov_residual(a: &Matrix, p: &Matrix, q: &Matrix) -> f64 {
    let apa = &(&a.transpose() * p) * a;
    (&(&apa - p) + q).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_geometric_series() {
        let p = solve_discrete_lyapunov(&Matrix::scalar(0.5), &Matrix::scalar(1.0)).unwrap();
        assert!((p[(0, 0)] - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn decoupled_diagonal() {
        let p = solve_discrete_lyapunov(&Matrix::from_diag(&[0.5, 0.3]), &Matrix::identity(2)).unwrap();
        assert!((p[(0, 0)] - 1.0 / 0.75).abs() < 1e-14);
        assert!((p[(1, 1)] - 1.0 / 0.91).abs() < 1e-14);
        assert!(p[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn nilpotent_series_terminates() {
        let a = Matrix::from_rows(&[[0.0, 10.0], [0.0, 0.0]]).unwrap();
        let p = solve_discrete_lyapunov(&a, &Matrix::identity(2)).unwrap();
        assert!((p[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((p[(1, 1)] - 101.0).abs() < 1e-12);
        assert!(p[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn unstable_rejected() {
        let err = solve_discrete_lyapunov(&Matrix::scalar(1.0), &Matrix::scalar(1.0)).unwrap_err();
        assert!(matches!(err, Error::Unstable { .. }));
    }

    #[test]
    fn indefinite_q_rejected() {
        let err = solve_discrete_lyapunov(&Matrix::scalar(0.5), &Matrix::scalar(-1.0)).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    }
}
