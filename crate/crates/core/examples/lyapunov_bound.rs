//! Method-2 bound with both decay-factor modes.
//!
//! For a non-normal `A` the two modes can differ a lot; only `Eq25` is a
//! guaranteed decay rate of `V(x) = xᵀPx`.

use masbound::linalg::Matrix;
use masbound::lyapunov_bound::{analyze_unforced, LyapunovConfig, SigmaMode};
use masbound::mas::exact_t_star_unforced;
use masbound::montecarlo::builtin_system;
use masbound::{LtiSystem, OutputBox};

fn show(name: &str, sys: &LtiSystem, bx: &OutputBox) -> masbound::Result<()> {
    println!("{name}: exact t* = {}", exact_t_star_unforced(sys, bx)?.t_star);
    for mode in [SigmaMode::Eq25, SigmaMode::Paper] {
        let an = analyze_unforced(sys, bx, &LyapunovConfig::with_sigma_mode(mode))?;
        let p = &an.pair;
        println!(
            "  {mode:?}: sigma = {:.6}, r1 = {:.4e}, r2 = {:.4e}, {} vertices, m2 = {}",
            p.sigma,
            p.r1,
            p.r2,
            an.vertices.len(),
            an.report.m
        );
    }
    Ok(())
}

fn main() -> masbound::Result<()> {
    let shear = LtiSystem::new(Matrix::from_rows(&[[0.5, 2.0], [0.0, 0.5]])?, Matrix::row_vector(&[1.0, 0.0]))?;
    show("shear", &shear, &OutputBox::symmetric_unit(1))?;
    show("3-state", &builtin_system(), &OutputBox::symmetric_unit(1))?;
    Ok(())
}
