//! Norm audit of the concentrating sequence and the sharpness dichotomy.
//!
//! ```text
//! cargo run --release --example adams_sequence
//! ```

use adams_lab::adams_sequence::{blowup_probe, fidelity_sweep, part_decay, CapVariant, SequenceIndex};
use adams_lab::functional_lab::{constants, Convention};
use adams_lab::radial_core::{Tail, WeightSpec};

fn main() -> adams_lab::Result<()> {
    let consts = constants(4, 0.5)?;
    let weight = WeightSpec::new(4, 0.5, Tail::constant(), 1.0)?;
    let sweep: Vec<SequenceIndex> = [1e3, 1e5, 1e7, 1e9]
        .iter()
        .map(|&n| SequenceIndex::new(n))
        .collect::<Result<_, _>>()?;

    for variant in [CapVariant::Printed, CapVariant::Continuous] {
        println!("cap variant: {}", variant.name());
        let reports = fidelity_sweep(&sweep, &consts, &weight, Convention::General, variant)?;
        println!("{:>6} {:>12} {:>12} {:>12} {:>12} {:>12}", "log10n", "total", "gap1", "i2", "i3", "i2p");
        for r in &reports {
            println!(
                "{:>6.1} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e}",
                r.ln_n / std::f64::consts::LN_10,
                r.norm_total,
                r.continuity_gap1,
                r.parts.i2,
                r.parts.i3,
                r.parts.i2p
            );
        }
        for d in part_decay(&reports, &["i1", "i1p", "i2p", "i3", "i3p", "l1", "l2", "l3"]) {
            println!(
                "  {:<4} slope in ln n {:>8.4}, weakest decade factor {:>8.3}",
                d.name, d.slope, d.min_factor_per_decade
            );
        }
    }

    // The threshold only shows once ‖w_n‖ is close to one, which takes ln n in the millions.
    let long: Vec<SequenceIndex> = [1e1, 1e2, 1e4, 1e6, 1e7, 1e8]
        .iter()
        .map(|&l| SequenceIndex::from_ln(l))
        .collect::<Result<_, _>>()?;
    for convention in Convention::ALL {
        for ratio in [0.9, 1.1] {
            let t = blowup_probe(ratio, &long, &consts, &weight, convention, CapVariant::Continuous)?;
            println!("{convention} ratio {ratio}: verdict {}", t.verdict.name());
            for r in &t.rows {
                println!(
                    "   ln n {:>8.1e}  ||w_n|| {:>10.6}  ln value {:>12.5e}  max exponent {:>12.5e}",
                    r.ln_n, r.norm, r.log_value, r.max_exponent
                );
            }
        }
    }
    Ok(())
}
