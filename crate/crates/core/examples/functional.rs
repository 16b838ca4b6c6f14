//! The Adams functional of a normalized Gaussian at growing multiples of `α_β`,
//! plus the concentration threshold and embedding ratios.
//!
//! ```text
//! cargo run --release --example functional
//! ```

use std::sync::Arc;

use adams_lab::functional_lab::{
    adams_functional, constants, e_norm, embedding_probe, lions_threshold, radial_decay_check, AdamsValue, Convention,
};
use adams_lab::radial_core::{build_grid, RadialFunction, Tail, WeightSpec};

fn main() -> adams_lab::Result<()> {
    let c = constants(4, 0.5)?;
    let w = WeightSpec::new(4, 0.5, Tail::constant(), 1.0)?;
    let grid = Arc::new(build_grid(4, 12.0, 256, 256)?);
    let gauss = RadialFunction::from_fn(Arc::clone(&grid), |r| (-r * r).exp())?;
    let v = gauss.scale(1.0 / e_norm(&gauss, &w)?.norm);
    println!("|v| = {:.12}", e_norm(&v, &w)?.norm);

    let alpha_beta = c.alpha_beta(Convention::General)?;
    for ratio in [0.5, 1.0, 4.0, 16.0] {
        match adams_functional(&v, ratio * alpha_beta, c.gamma)? {
            AdamsValue::Finite(s) => println!(
                "alpha = {ratio:>4} alpha_beta: inner {:.6e} outer {:.6e} tail <= {:.1e} (max exponent {:.3})",
                s.inner, s.outer, s.tail_bound, s.max_exponent
            ),
            AdamsValue::Overflow { max_exponent } => {
                println!("alpha = {ratio:>4} alpha_beta: overflow (max exponent {max_exponent:.3e})")
            }
        }
    }

    for q in [2.0, 4.0, 8.0] {
        println!("|v|_{q} / |v| = {:.6}", embedding_probe(&v, &w, q)?);
    }
    println!("radial decay constant on r >= 1: {:.6}", radial_decay_check(&v)?);
    for m in [0.5, 0.9, 0.99] {
        println!("threshold at |u| = {m}: {:.6e}", lions_threshold(m, 4, c.gamma)?.value);
    }
    Ok(())
}
