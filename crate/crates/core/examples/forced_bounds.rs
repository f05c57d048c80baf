//! Constant-input case: all three indices as the steady-state margin ε shrinks.

use masbound::linalg::Matrix;
use masbound::lyapunov_bound::bound_m2_forced;
use masbound::mas::{exact_t_star_forced, exact_t_star_unforced};
use masbound::model::dc_gain;
use masbound::power_series::{bound_m1_forced, bound_m1_unforced};
use masbound::{LtiSystem, OutputBox};

fn main() -> masbound::Result<()> {
    let a = Matrix::from_rows(&[[0.7, 0.3], [-0.3, 0.7]])?;
    let sys = LtiSystem::with_input(a, Matrix::column(&[1.0, 0.5]), Matrix::row_vector(&[1.0, -1.0]), None)?;
    let bx = OutputBox::symmetric_unit(1);
    println!("H0 = {:?}", dc_gain(&sys)?.as_slice());
    println!(
        "unforced: t* = {}, m1 = {}",
        exact_t_star_unforced(&sys.unforced(), &bx)?.t_star,
        bound_m1_unforced(&sys, &bx)?.m
    );
    for eps in [1.0, 0.5, 0.1, 0.01] {
        let t = exact_t_star_forced(&sys, &bx, eps)?.t_star;
        let m1 = bound_m1_forced(&sys, &bx, eps)?.m;
        let m2 = bound_m2_forced(&sys, &bx, eps)?.m;
        println!("eps = {eps:<5} t* = {t:<3} m1 = {m1:<4} m2 = {m2}");
    }
    Ok(())
}
