//! Discrete energy, hypotheses and a numerical mountain-pass solver.

mod energy;
mod geometry;
mod hypotheses;
mod nonlinearity;
mod solver;

pub use energy::{energy, nodal_hats, solution_residual, weak_residual, EnergyModel, EnergyState, CLAMPED, EPS_REG};
pub use geometry::{find_geometry, GeometryCertificate, GeometryOptions};
pub use hypotheses::{
    check_hypotheses, declared_constants, default_samples, h5_denominator, h5_threshold, Declared, HypothesisCheck,
    HypothesisReport,
};
pub use nonlinearity::NonlinearitySpec;
pub use solver::{mountain_pass_solve, ps_bound, SolveOptions, SolveResult};
