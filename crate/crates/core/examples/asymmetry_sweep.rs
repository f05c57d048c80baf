//! Effect of an asymmetric output box on t*, m1 and m2 for the built-in
//! 3-state system, with the upper limit held at 1.

use masbound::lyapunov_bound::SigmaMode;
use masbound::montecarlo::{asymmetry_sweep, builtin_system, sweep_csv};

fn main() -> Result<(), masbound::Error> {
    let grid = [0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];
    let rows = asymmetry_sweep(&builtin_system(), 1.0, &grid, SigmaMode::Eq25)?;
    print!("{}", sweep_csv(&rows));
    Ok(())
}
