//! Hypothesis report for an exponential nonlinearity across `λ`.
//!
//! ```text
//! cargo run --example hypotheses
//! ```

use adams_lab::functional_lab::{constants, Convention};
use adams_lab::mountain_pass::{check_hypotheses, default_samples, ps_bound, NonlinearitySpec};

fn main() -> adams_lab::Result<()> {
    let c = constants(4, 0.5)?;
    let alpha0 = 10.0 * c.alpha_beta_general;
    for lambda in [0.05, 10.0, 1000.0] {
        let spec = NonlinearitySpec::critical(alpha0, 2.0, lambda, c.gamma)?;
        let rep = check_hypotheses(&spec, &c, Convention::General, &default_samples(100.0, 200))?;
        println!("lambda = {lambda}: ps_bound = {:.8}", ps_bound(&spec, &c, Convention::General)?);
        for k in &rep.checks {
            println!("  {:<8} {:<5} margin {:>12.4e}  {}", k.name, k.pass, k.margin, k.note);
        }
    }
    Ok(())
}
