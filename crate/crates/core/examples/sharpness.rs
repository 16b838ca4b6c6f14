//! Below and above the sharp exponent along an extended sweep of `ln n`.
//!
//! ```text
//! cargo run --release --example sharpness
//! ```

use adams_lab::adams_sequence::{blowup_probe, CapVariant, SequenceIndex};
use adams_lab::functional_lab::{constants, Convention};
use adams_lab::radial_core::{Tail, WeightSpec};

fn main() -> adams_lab::Result<()> {
    let consts = constants(4, 0.5)?;
    let weight = WeightSpec::new(4, 0.5, Tail::constant(), 1.0)?;
    let sweep: Vec<SequenceIndex> = [10.0, 1e2, 1e4, 1e6, 1e7, 1e8]
        .iter()
        .map(|&l| SequenceIndex::from_ln(l))
        .collect::<Result<_, _>>()?;
    for ratio in [0.5, 0.9, 1.0, 1.1, 1.5] {
        let t = blowup_probe(ratio, &sweep, &consts, &weight, Convention::General, CapVariant::Continuous)?;
        let logs: Vec<String> = t.rows.iter().map(|r| format!("{:>11.3e}", r.log_value)).collect();
        println!("alpha/alpha_beta = {ratio:<4} {:<9} ln I: {}", t.verdict.name(), logs.join(" "));
    }
    Ok(())
}
