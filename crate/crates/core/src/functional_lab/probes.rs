use super::norm::{e_norm, lebesgue_power};
use crate::error::{LabError, Result};
use crate::radial_core::{gradient_radial, RadialFunction, WeightSpec};

/// Smallest `C` with `|u(r)| ≤ C r^{-2(N-1)/N} |u|_{N/2}^{(N-2)/N} |∇u|_{N/2}^{2/N}`
/// at every node `r ≥ 1`.
pub fn radial_decay_check(u: &RadialFunction) -> Result<f64> {
    let n = u.dim() as f64;
    let p = n / 2.0;
    let lp = lebesgue_power(u, p)?.powf(1.0 / p);
    let grad = gradient_radial(u)?;
    let gp = lebesgue_power(&grad, p)?.powf(1.0 / p);
    if lp == 0.0 {
        return Err(LabError::ZeroNorm("|u|_{N/2}"));
    }
    if gp == 0.0 {
        return Err(LabError::ZeroNorm("|grad u|_{N/2}"));
    }
    let scale = lp.powf((n - 2.0) / n) * gp.powf(2.0 / n);
    let decay = 2.0 * (n - 1.0) / n;
    Ok(u
        .grid()
        .nodes()
        .iter()
        .zip(u.values())
        .filter(|(r, _)| **r >= 1.0)
        .map(|(r, v)| v.abs() * r.powf(decay) / scale)
        .fold(0.0, f64::max))
}

/// `|u|_q / ‖u‖` for `q ≥ N/2`.
pub fn embedding_probe(u: &RadialFunction, spec: &WeightSpec, q: f64) -> Result<f64> {
    let half = u.dim() as f64 / 2.0;
    if !(q.is_finite() && q >= half) {
        return Err(LabError::param("q", format!("need q >= N/2 = {half}, got {q}")));
    }
    let norm = e_norm(u, spec)?.norm;
    if norm == 0.0 {
        return Err(LabError::ZeroNorm("||u||"));
    }
    Ok(lebesgue_power(u, q)?.powf(1.0 / q) / norm)
}

/// Upper end `U(u)` of the exponent range in the Lions-type improvement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationThreshold {
    pub value: f64,
}

/// `U = (1 - ‖u‖^{N/2})^{-2γ/N}` for `‖u‖ < 1`, `+∞` at `‖u‖ = 1`.
pub fn lions_threshold(norm_u: f64, dim: usize, gamma: f64) -> Result<ConcentrationThreshold> {
    if !(0.0..=1.0).contains(&norm_u) {
        return Err(LabError::param("norm_u", format!("must lie in [0, 1], got {norm_u}")));
    }
    let n = dim as f64;
    let value = if norm_u == 1.0 {
        f64::INFINITY
    } else {
        (1.0 - norm_u.powf(n / 2.0)).powf(-2.0 * gamma / n)
    };
    Ok(ConcentrationThreshold { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_core::{build_grid, Tail};
    use approx::assert_relative_eq;
    use std::sync::Arc;

    #[test]
    fn lions_values() {
        assert_eq!(lions_threshold(0.0, 4, 4.0).unwrap().value, 1.0);
        assert_eq!(lions_threshold(1.0, 4, 4.0).unwrap().value, f64::INFINITY);
        let half = 0.5f64.sqrt();
        assert_relative_eq!(lions_threshold(half, 4, 4.0).unwrap().value, 4.0, max_relative = 1e-12);
        assert!(lions_threshold(1.1, 4, 4.0).is_err());
        assert!(lions_threshold(-0.1, 4, 4.0).is_err());
        assert!(lions_threshold(0.7, 4, 4.0).unwrap().value > 1.0);
    }

    #[test]
    fn decay_constant_is_scale_free() {
        let g = Arc::new(build_grid(4, 10.0, 64, 64).unwrap());
        let u = RadialFunction::from_fn(Arc::clone(&g), |r| (-r).exp()).unwrap();
        let c1 = radial_decay_check(&u).unwrap();
        let c2 = radial_decay_check(&u.scale(2.0)).unwrap();
        assert!(c1.is_finite() && c1 > 0.0);
        assert_relative_eq!(c1, c2, max_relative = 1e-12);
        assert!(matches!(radial_decay_check(&RadialFunction::zeros(g)), Err(LabError::ZeroNorm(_))));
    }

    #[test]
    fn embedding_ratio() {
        let g = Arc::new(build_grid(4, 4.0, 64, 64).unwrap());
        let spec = WeightSpec::new(4, 0.5, Tail::constant(), 1.0).unwrap();
        let u = RadialFunction::from_fn(Arc::clone(&g), |r| (-r * r).exp()).unwrap().sampled();
        let a = embedding_probe(&u, &spec, 2.0).unwrap();
        let b = embedding_probe(&u.scale(3.0), &spec, 2.0).unwrap();
        assert!(a.is_finite() && a > 0.0 && a < 1.0);
        assert_relative_eq!(a, b, max_relative = 1e-12);
        assert!(embedding_probe(&u, &spec, 1.0).is_err());
    }
}
