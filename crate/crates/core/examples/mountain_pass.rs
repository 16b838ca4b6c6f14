//! Mountain-pass solve for a power and an exponential right-hand side.
//!
//! ```text
//! cargo run --release --example mountain_pass
//! ```

use std::sync::Arc;
use std::time::Instant;

use adams_lab::functional_lab::{constants, Convention};
use adams_lab::mountain_pass::{
    check_hypotheses, default_samples, mountain_pass_solve, NonlinearitySpec, SolveOptions,
};
use adams_lab::radial_core::{build_grid, Tail, WeightSpec};

fn main() -> adams_lab::Result<()> {
    let consts = constants(4, 0.5)?;
    let weight = WeightSpec::new(4, 0.5, Tail::constant(), 1.0)?;
    let grid = Arc::new(build_grid(4, 8.0, 128, 128)?);

    let alpha0 = 10.0 * consts.alpha_beta_general;
    let specs = [
        ("power theta=5", NonlinearitySpec::subcritical(5.0, 1.0)?),
        ("exp alpha0=10 alpha_beta, lambda=10", NonlinearitySpec::critical(alpha0, 2.0, 10.0, consts.gamma)?),
        ("exp alpha0=10 alpha_beta, lambda=1000", NonlinearitySpec::critical(alpha0, 2.0, 1000.0, consts.gamma)?),
    ];
    for (label, spec) in specs {
        println!("== {label}");
        let rep = check_hypotheses(&spec, &consts, Convention::General, &default_samples(100.0, 120))?;
        for c in &rep.checks {
            println!("  {:<8} {:<5} {}", c.name, if c.pass { "pass" } else { "FAIL" }, c.note);
        }
        let clock = Instant::now();
        let res = mountain_pass_solve(&spec, &weight, &grid, &SolveOptions::default())?;
        let cert = &res.certificate;
        println!(
            "  rho {:.4e}  ring_min {:.4e}  t_neg {:.4e}",
            cert.rho, cert.ring_min, cert.t_neg
        );
        println!(
            "  level {:.10e}  residual {:.3e}  |u*| {:.6e}  u*(r0) {:.6e}",
            res.level,
            res.residual,
            res.norm,
            res.u_star.values()[0]
        );
        println!(
            "  rounds {}  newton {}  AR gap {:.3e}  ps_bound {:.6e}  below {}  ({:.2?})",
            res.descent_rounds,
            res.newton_steps,
            res.ar_gap,
            res.ps_bound,
            res.below_bound,
            clock.elapsed()
        );
    }
    Ok(())
}
