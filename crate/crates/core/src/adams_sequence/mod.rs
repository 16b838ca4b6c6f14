//! The concentrating sequence `w_n`, its norm audit and the sharpness experiment.

mod fidelity;
mod profile;
mod sweeps;

pub use fidelity::{fidelity, FidelityParts, FidelityReport};
pub use profile::{adams_fn, default_grid, AdamsProfile, CapVariant, Piece, SequenceIndex};
pub use sweeps::{
    blowup_probe, cap_log_integral, fidelity_sweep, norm_trend, part_decay, BlowupRow, BlowupTable,
    BlowupVerdict, NormTrend, NormTrendRow, PartDecay,
};
