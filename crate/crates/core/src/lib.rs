//! Numerical lab for logarithmically weighted Adams inequalities on radial
//! functions in `R^N`, with a mountain-pass solver for the associated
//! fourth-order problem.

pub mod error;
pub mod adams_sequence;
pub mod cli;
pub mod functional_lab;
pub mod mountain_pass;
pub mod radial_core;

pub use error::{LabError, Result};
