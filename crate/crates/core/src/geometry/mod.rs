//! Polytopes in H-representation, a dense simplex LP and vertex enumeration.

mod lp;
mod polytope;
mod vertices;

pub use lp::{is_redundant, is_redundant_with, lp_maximize, lp_maximize_with, LpOutcome, LpStatus};
pub use polytope::Polytope;
pub use vertices::{enumerate_vertices, enumerate_vertices_with, VertexConfig, DEFAULT_DIMENSION_CAP};
