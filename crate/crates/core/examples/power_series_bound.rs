//! Method-1 bound for a few small systems, printed next to the exact index.

use masbound::linalg::{char_poly_coeffs, Matrix};
use masbound::mas::exact_t_star_unforced;
use masbound::power_series::bound_m1_unforced;
use masbound::{LtiSystem, OutputBox};

fn main() -> masbound::Result<()> {
    let cases = [
        ("scalar a = 0.5", Matrix::scalar(0.5), Matrix::scalar(1.0)),
        ("scalar a = -0.9", Matrix::scalar(-0.9), Matrix::scalar(1.0)),
        (
            "damped rotation",
            Matrix::from_rows(&[[0.8, -0.4], [0.4, 0.8]])?,
            Matrix::row_vector(&[1.0, 0.0]),
        ),
    ];
    let boxes = [OutputBox::symmetric_unit(1), OutputBox::new(vec![0.1], vec![1.0])?];

    for (name, a, c) in cases {
        println!("{name}: char poly coefficients {:?}", char_poly_coeffs(&a)?);
        let sys = LtiSystem::new(a, c)?;
        for bx in &boxes {
            let m1 = bound_m1_unforced(&sys, bx)?;
            let exact = exact_t_star_unforced(&sys, bx)?;
            println!("  gamma = {:>4}: m1 = {:>3}, t* = {}", bx.gamma(), m1.m, exact.t_star);
        }
    }
    Ok(())
}
