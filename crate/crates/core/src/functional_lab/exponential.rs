use std::cell::Cell;

use crate::error::{LabError, Result};
use crate::radial_core::{quad_radial_with, radial_rule, RadialFunction};

/// Largest admissible exponent `α|u|^γ` before the functional is declared divergent.
pub const OVERFLOW_BUDGET: f64 = 700.0;

/// Finite value of `∫(e^{α|u|^γ} - 1)` split at `|x| = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamsSplit {
    /// Over `|x| < 1`.
    pub inner: f64,
    /// Over `1 ≤ |x| ≤ R`, summed as the exponential series of moments.
    pub outer: f64,
    pub total: f64,
    /// Upper bound for `|x| > R` from the radial decay envelope.
    pub tail_bound: f64,
    pub max_exponent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdamsValue {
    Finite(AdamsSplit),
    /// Some exponent exceeded [`OVERFLOW_BUDGET`].
    Overflow { max_exponent: f64 },
}

impl AdamsValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            AdamsValue::Finite(s) => Some(s.total),
            AdamsValue::Overflow { .. } => None,
        }
    }

    pub fn is_overflow(&self) -> bool {
        matches!(self, AdamsValue::Overflow { .. })
    }
}

fn check_params(alpha: f64, gamma: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(LabError::param("alpha", format!("must be non-negative, got {alpha}")));
    }
    if !(gamma.is_finite() && gamma > 1.0) {
        return Err(LabError::param("gamma", format!("must exceed 1, got {gamma}")));
    }
    Ok(())
}

/// Largest `α|u|^γ` over the nodes and the quadrature points of `[lo, hi]`.
pub fn max_exponent(u: &RadialFunction, alpha: f64, gamma: f64, lo: f64, hi: f64) -> Result<f64> {
    let m = Cell::new(0.0f64);
    quad_radial_with(u, lo, hi, |_, v| {
        m.set(m.get().max(alpha * v.abs().powf(gamma)));
        0.0
    })?;
    let nodal = u
        .grid()
        .nodes()
        .iter()
        .zip(u.values())
        .filter(|(r, _)| **r >= lo && **r <= hi)
        .map(|(_, v)| alpha * v.abs().powf(gamma))
        .fold(0.0, f64::max);
    Ok(m.get().max(nodal))
}

/// `∫_{lo ≤ |x| ≤ hi}(e^{α|u|^γ} - 1)` by direct `expm1` quadrature, or the
/// overflow flag.
pub fn exp_integral(u: &RadialFunction, alpha: f64, gamma: f64, lo: f64, hi: f64) -> Result<AdamsValue> {
    check_params(alpha, gamma)?;
    let max_exp = max_exponent(u, alpha, gamma, lo, hi)?;
    if max_exp > OVERFLOW_BUDGET {
        return Ok(AdamsValue::Overflow { max_exponent: max_exp });
    }
    let v = quad_radial_with(u, lo, hi, |_, v| (alpha * v.abs().powf(gamma)).exp_m1())?;
    Ok(AdamsValue::Finite(AdamsSplit {
        inner: v,
        outer: 0.0,
        total: v,
        tail_bound: 0.0,
        max_exponent: max_exp,
    }))
}

/// `Σ_k α^k/k! ∫_{1 ≤ |x| ≤ R} |u|^{γk}`.
fn outer_series(u: &RadialFunction, alpha: f64, gamma: f64) -> Result<f64> {
    let grid = u.grid();
    let rule = radial_rule(grid, 1.0, grid.radius(), false)?;
    let x: Vec<f64> = rule
        .iter()
        .map(|n| alpha * u.eval_in(n.interval, n.r).abs().powf(gamma))
        .collect();
    let x_max = x.iter().copied().fold(0.0, f64::max);
    let mut terms = x.clone();
    let mut sum = 0.0;
    let mut k = 1usize;
    loop {
        let moment: f64 = rule.iter().zip(&terms).map(|(n, t)| n.weight * t).sum();
        sum += moment;
        if (k as f64 > x_max && moment <= 1e-17 * sum) || moment == 0.0 {
            break;
        }
        k += 1;
        for (t, xi) in terms.iter_mut().zip(&x) {
            *t *= xi / k as f64;
        }
    }
    Ok(sum)
}

/// Bound for the region `|x| > R` from `|u(r)| ≤ K r^{-2(N-1)/N}`, `K` fitted on `[1, R]`.
fn tail_bound(u: &RadialFunction, alpha: f64, gamma: f64) -> f64 {
    let grid = u.grid();
    let n = grid.dim() as f64;
    let p = 2.0 * (n - 1.0) / n;
    let r_max = grid.radius();
    let k = grid
        .nodes()
        .iter()
        .zip(u.values())
        .filter(|(r, _)| **r >= 1.0)
        .map(|(r, v)| v.abs() * r.powf(p))
        .fold(0.0, f64::max);
    if k == 0.0 || alpha == 0.0 {
        return 0.0;
    }
    if p * gamma <= n {
        return f64::INFINITY;
    }
    let x = alpha * (k * r_max.powf(-p)).powf(gamma);
    let omega = super::sphere_area(grid.dim());
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 1..10_000 {
        term *= x / j as f64;
        let add = term / (p * gamma * j as f64 - n);
        sum += add;
        if j as f64 > x && add <= 1e-17 * sum {
            break;
        }
    }
    omega * r_max.powf(n) * sum
}

/// `∫_{R^N}(e^{α|u|^γ} - 1)` on the truncated domain, split at `|x| = 1`.
pub fn adams_functional(u: &RadialFunction, alpha: f64, gamma: f64) -> Result<AdamsValue> {
    check_params(alpha, gamma)?;
    let r_max = u.grid().radius();
    let max_exp = max_exponent(u, alpha, gamma, 0.0, r_max)?;
    if max_exp > OVERFLOW_BUDGET {
        return Ok(AdamsValue::Overflow { max_exponent: max_exp });
    }
    let inner = quad_radial_with(u, 0.0, 1.0, |_, v| (alpha * v.abs().powf(gamma)).exp_m1())?;
    let outer = outer_series(u, alpha, gamma)?;
    Ok(AdamsValue::Finite(AdamsSplit {
        inner,
        outer,
        total: inner + outer,
        tail_bound: tail_bound(u, alpha, gamma),
        max_exponent: max_exp,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_core::build_grid;
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn bump(g: &Arc<crate::radial_core::RadialGrid>, height: f64) -> RadialFunction {
        RadialFunction::from_fn(Arc::clone(g), move |r| height * (-r * r / 2.0).exp()).unwrap()
    }

    #[test]
    fn zero_function_gives_zero() {
        let g = Arc::new(build_grid(4, 6.0, 32, 32).unwrap());
        let v = adams_functional(&RadialFunction::zeros(g), 3.0, 4.0).unwrap();
        assert_eq!(v.value(), Some(0.0));
    }

    #[test]
    fn split_matches_direct_integral() {
        let g = Arc::new(build_grid(4, 6.0, 64, 64).unwrap());
        let u = bump(&g, 1.3);
        let split = adams_functional(&u, 2.0, 4.0).unwrap().value().unwrap();
        let whole = exp_integral(&u, 2.0, 4.0, 0.0, 6.0).unwrap().value().unwrap();
        assert_relative_eq!(split, whole, max_relative = 1e-12);
    }

    #[test]
    fn large_values_overflow() {
        let g = Arc::new(build_grid(4, 6.0, 32, 32).unwrap());
        let u = RadialFunction::from_fn(g, |_| 40.0).unwrap();
        assert!(adams_functional(&u, 1.0, 4.0).unwrap().is_overflow());
    }

    #[test]
    fn increasing_in_alpha_and_rejects_bad_parameters() {
        let g = Arc::new(build_grid(4, 6.0, 32, 32).unwrap());
        let u = bump(&g, 1.0);
        let vals: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&a| adams_functional(&u, a, 4.0).unwrap().value().unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
        assert!(adams_functional(&u, -1.0, 4.0).is_err());
        assert!(adams_functional(&u, 1.0, 1.0).is_err());
    }

    #[test]
    fn tail_bound_is_finite_for_decaying_profiles() {
        let g = Arc::new(build_grid(4, 6.0, 32, 32).unwrap());
        match adams_functional(&bump(&g, 1.0), 1.0, 4.0).unwrap() {
            AdamsValue::Finite(s) => assert!(s.tail_bound.is_finite() && s.tail_bound > 0.0),
            other => panic!("{other:?}"),
        }
    }
}
