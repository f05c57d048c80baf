use super::Matrix;
use crate::error::{Error, Result};

/// Coefficients `c₀ … c_{n−1}` of `det(sI − M) = sⁿ + c_{n−1}s^{n−1} + … + c₀`
/// by the Faddeev–LeVerrier trace recursion.
pub fn char_poly_coeffs(m: &Matrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut coeffs = vec![0.0; n];
    // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k
    let mut mk = Matrix::zeros(n, n);
    let mut prev_c = 1.0;
    for k in 1..=n {
        let mut next = m.matmul(&mk)?;
        for i in 0..n {
            next[(i, i)] += prev_c;
        }
        let am = m.matmul(&next)?;
        let c = -am.trace() / k as f64;
        coeffs[n - k] = c;
        prev_c = c;
        mk = next;
    }
    Ok(coeffs)
}

/// Evaluates the monic polynomial with lower coefficients `coeffs` at a complex point.
pub fn eval_monic(coeffs: &[f64], z: num_complex::Complex64) -> num_complex::Complex64 {
    let mut acc = num_complex::Complex64::new(1.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar() {
        assert_eq!(char_poly_coeffs(&Matrix::scalar(0.5)).unwrap(), vec![-0.5]);
    }

    #[test]
    fn companion_of_repeated_root() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [-0.25, 1.0]]).unwrap();
        let c = char_poly_coeffs(&a).unwrap();
        assert!((c[0] - 0.25).abs() < 1e-15 && (c[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn asymmetry_example_matrix() {
        // (s + 0.98)(s² − 1.8 s + 0.8725) expanded by hand
        let a = Matrix::from_rows(&[[0.9, -0.25, 1.0], [0.25, 0.9, 0.0], [0.0, 0.0, -0.98]]).unwrap();
        let c = char_poly_coeffs(&a).unwrap();
        let want = [0.85505, -0.8915, -0.82];
        for (g, w) in c.iter().zip(want) {
            assert!((g - w).abs() < 1e-13, "{g} vs {w}");
        }
    }

    #[test]
    fn non_square_rejected() {
        assert!(char_poly_coeffs(&Matrix::zeros(1, 2)).is_err());
    }
}
