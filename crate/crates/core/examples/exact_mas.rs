//! Builds the maximal admissible set of a system read from JSON and prints
//! its non-redundant inequalities.
//!
//!     cargo run --example exact_mas -- path/to/system.json

use masbound::mas::{exact_t_star_unforced, verify_certificate};
use masbound::model::SystemFile;
use masbound::tol::Tolerances;

const DEFAULT: &str = r#"{
    "A": [[0.9, -0.25, 1.0], [0.25, 0.9, 0.0], [0.0, 0.0, -0.98]],
    "C": [[-1.0, 1.0, 0.5]],
    "y_lower": [0.5],
    "y_upper": [1.0]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let spec = SystemFile::from_json(&text)?.into_spec()?;
    let mas = exact_t_star_unforced(&spec.system, &spec.output_box)?;
    println!("t* = {}, {} inequalities", mas.t_star, mas.polytope.len());
    print!("{}", mas.polytope.to_csv());

    let ok = verify_certificate(&spec.system, &spec.output_box, &mas, 2, &Tolerances::default())?;
    println!("rows for t*+1 and t*+2 redundant: {ok}");
    Ok(())
}
