//! Sharp exponents under both closed forms, and their limit as `β → 0⁺`.
//!
//! ```text
//! cargo run --example constants
//! ```

use adams_lab::functional_lab::{constants, constants_unchecked};
use adams_lab::radial_core::beta_interval;

fn main() -> adams_lab::Result<()> {
    for dim in [4, 6, 8] {
        let (lo, hi) = beta_interval(dim);
        let c = constants(dim, 0.9)?;
        println!(
            "N = {dim}: beta in ({lo:.4}, {hi}); at beta = 0.9 gamma = {:.4}, alpha_beta = {:.6e}, V_N = {:.6}",
            c.gamma, c.alpha_beta_general, c.v_n
        );
    }

    println!("\nN = 4, beta -> 0+ (outside the admissible window, closed forms only)");
    println!("{:>8} {:>16} {:>16} {:>10}", "beta", "general", "fourdim", "admissible");
    for beta in [0.5, 0.1, 1e-2, 1e-4, 1e-6] {
        let c = constants_unchecked(4, beta)?;
        println!(
            "{beta:>8.0e} {:>16.8} {:>16.8} {:>10}",
            c.alpha_beta_general,
            c.alpha_beta_fourdim.unwrap_or(f64::NAN),
            c.admissible()
        );
    }
    println!("32 pi^2 = {:.8}", 32.0 * std::f64::consts::PI.powi(2));
    Ok(())
}
