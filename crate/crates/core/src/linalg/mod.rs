//! Dense linear algebra used by the bound algorithms: a small row-major
//! matrix type, general and symmetric eigenvalues, singular values, the
//! characteristic polynomial and the discrete Lyapunov equation.

mod charpoly;
mod eigen;
mod lyapunov;
mod matrix;
mod symmetric;

pub use charpoly::{char_poly_coeffs, eval_monic};
pub use eigen::{eigenvalues, spectral_radius, Spectrum};
pub use lyapunov::{lyapunov_residual, solve_discrete_lyapunov};
pub use matrix::{dot, norm2, Matrix};
pub use symmetric::{condition_number, min_singular_value, singular_values, sym_eig_extremes, sym_eigen};
