//! Sharp constants, the weighted norm, the exponential functional and related probes.

mod constants;
mod exponential;
mod norm;
mod probes;

pub use constants::{constants, constants_unchecked, sphere_area, unit_ball_volume, Convention, SobolevConstants};
pub use exponential::{adams_functional, exp_integral, max_exponent, AdamsSplit, AdamsValue, OVERFLOW_BUDGET};
pub use norm::{e_norm, NormBreakdown};
pub use probes::{embedding_probe, lions_threshold, radial_decay_check, ConcentrationThreshold};
