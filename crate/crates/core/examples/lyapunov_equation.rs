use masbound::linalg::{lyapunov_residual, solve_discrete_lyapunov, spectral_radius, sym_eig_extremes, Matrix};

// AᵀPA − P = −I for a stable non-normal matrix.
fn main() -> masbound::Result<()> {
    let a = Matrix::from_rows(&[[0.6, 1.5, 0.0], [0.0, 0.6, 1.5], [0.0, 0.0, 0.6]])?;
    let q = Matrix::identity(3);
    let p = solve_discrete_lyapunov(&a, &q)?;
    println!("P = {p:?}");
    println!("residual = {:.2e}", lyapunov_residual(&a, &p, &q));
    let (lo, hi) = sym_eig_extremes(&p)?;
    println!("eig(P) in [{lo:.4}, {hi:.4}]");
    let rho = spectral_radius(&a)?;
    println!("1 - 1/lambda_max(P) = {:.6}, rho(A)^2 = {:.6}", 1.0 - 1.0 / hi, rho * rho);
    Ok(())
}
