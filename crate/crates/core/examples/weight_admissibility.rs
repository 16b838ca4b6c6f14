//! Tail conditions on `χ` and the Muckenhoupt probe for several weights.
//!
//! ```text
//! cargo run --release --example weight_admissibility
//! ```

use adams_lab::radial_core::{check_chi_conditions, muckenhoupt_probe, Tail, WeightSpec};

fn main() -> adams_lab::Result<()> {
    let tails = [
        ("constant", Tail::constant()),
        ("bounded table", Tail::Bounded { knots: vec![(1.0, 1.0), (2.0, 3.0), (5.0, 2.0)] }),
        ("power 0.5", Tail::Power { delta: 0.5 }),
        ("power 4", Tail::Power { delta: 4.0 }),
        ("log sigma=2", Tail::Log { sigma: 2.0 }),
    ];
    let centers = [0.0, 0.5, 1.0, 3.0, 30.0];
    let radii = [0.05, 0.5, 2.0, 20.0];
    for (name, tail) in tails {
        let w = WeightSpec::new(4, 0.5, tail, 1.0)?;
        let rep = check_chi_conditions(&w, 1e6, 64)?;
        let a = muckenhoupt_probe(&w, &centers, &radii)?;
        println!(
            "{name:<14} x1 max {:>10.3e} {:<5}  x2 max {:>10.3e} {:<5}  x3 max {:>10.3e} {:<5}  A_N/2 probe {a:.4}",
            rep.x1.max, rep.x1.pass, rep.x2.max, rep.x2.pass, rep.x3.max, rep.x3.pass
        );
    }
    Ok(())
}
