//! Grid, quadrature and the three-point radial operators.
//!
//! ```text
//! cargo run --example quadrature
//! ```

use std::f64::consts::PI;
use std::sync::Arc;

use adams_lab::functional_lab::e_norm;
use adams_lab::radial_core::{build_grid, laplacian_radial, quad_radial, RadialFunction, Tail, WeightSpec};

fn main() -> adams_lab::Result<()> {
    println!("{:>6} {:>14} {:>14} {:>14}", "nodes", "analytic vol", "sampled vol", "max lap err");
    for per in [64, 128, 256, 512] {
        let g = Arc::new(build_grid(4, 10.0, per, per)?);
        let gauss = RadialFunction::from_fn(Arc::clone(&g), |r| (-r * r).exp())?;
        let exact = quad_radial(&gauss, 0.0, 10.0)?;
        let sampled = quad_radial(&gauss.sampled(), 0.0, 10.0)?;
        let lap = laplacian_radial(&gauss.sampled())?;
        let err = g
            .nodes()
            .iter()
            .zip(lap.values())
            .skip(1)
            .take(g.len() - 2)
            .filter(|(r, _)| **r > 0.05 && **r != 1.0)
            .map(|(&r, &v)| (v - (4.0 * r * r - 8.0) * (-r * r).exp()).abs())
            .fold(0.0, f64::max);
        println!(
            "{:>6} {:>14.3e} {:>14.3e} {:>14.3e}",
            g.len(),
            (exact - PI * PI).abs() / (PI * PI),
            (sampled - PI * PI).abs() / (PI * PI),
            err
        );
    }

    let g = Arc::new(build_grid(4, 10.0, 256, 256)?);
    let w = WeightSpec::new(4, 0.5, Tail::constant(), 1.0)?;
    let gauss = RadialFunction::from_fn(Arc::clone(&g), |r| (-r * r).exp())?;
    let nb = e_norm(&gauss, &w)?;
    println!(
        "\nweighted norm of e^(-r^2): bil {:.8} grad {:.8} lp {:.8} -> |u| = {:.8}",
        nb.bil_term, nb.grad_term, nb.lp_term, nb.norm
    );
    Ok(())
}
