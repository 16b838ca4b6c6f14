//! Radial grids, derivatives, quadrature and the logarithmic weight.

mod admissibility;
mod function;
mod grid;
mod integrate;
mod operators;
pub mod quadrature;
mod weight;

pub use admissibility::{
    check_chi_conditions, muckenhoupt_balls, muckenhoupt_probe, AdmissibilityReport, BallProbe,
    ConditionSample, ConditionSummary,
};
pub use function::{ClosureProfile, Evaluator, RadialFunction, RadialProfile};
pub use grid::{build_grid, RadialGrid, DEFAULT_INNER_DEPTH, MIN_SEGMENT_NODES};
pub use integrate::{quad_radial, quad_radial_with, radial_rule, RadialNode};
pub use operators::{gradient_matrix, gradient_radial, laplacian_matrix, laplacian_radial, DiffMatrix};
pub use weight::{beta_interval, weight_eval, Tail, WeightSpec};
