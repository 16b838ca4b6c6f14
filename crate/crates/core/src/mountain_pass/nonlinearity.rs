use crate::error::{LabError, Result};
use crate::functional_lab::OVERFLOW_BUDGET;

/// The right-hand side `f` of the model problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlinearitySpec {
    /// `f(t) = λ|t|^{θ-2} t`.
    SubcriticalPower { theta: f64, lambda: f64 },
    /// `f(t) = λ sgn(t)|t|^{q-1}(e^{α₀|t|^γ} - 1)`.
    CriticalExp { alpha0: f64, q: f64, lambda: f64, gamma: f64 },
}

impl NonlinearitySpec {
    pub fn subcritical(theta: f64, lambda: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 2.0) {
            return Err(LabError::param("theta", format!("must exceed 2, got {theta}")));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(LabError::param("lambda", format!("must be positive, got {lambda}")));
        }
        Ok(NonlinearitySpec::SubcriticalPower { theta, lambda })
    }

    pub fn critical(alpha0: f64, q: f64, lambda: f64, gamma: f64) -> Result<Self> {
        if !(alpha0.is_finite() && alpha0 > 0.0) {
            return Err(LabError::param("alpha0", format!("must be positive, got {alpha0}")));
        }
        if !(q.is_finite() && q >= 2.0) {
            return Err(LabError::param("q", format!("must be at least 2, got {q}")));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(LabError::param("lambda", format!("must be positive, got {lambda}")));
        }
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(LabError::param("gamma", format!("must exceed 1, got {gamma}")));
        }
        Ok(NonlinearitySpec::CriticalExp { alpha0, q, lambda, gamma })
    }

    pub fn is_critical(&self) -> bool {
        matches!(self, NonlinearitySpec::CriticalExp { .. })
    }

    /// Ambrosetti-Rabinowitz exponent: `θ`, or `q + γ` for the exponential kind.
    pub fn declared_theta(&self) -> f64 {
        match *self {
            NonlinearitySpec::SubcriticalPower { theta, .. } => theta,
            NonlinearitySpec::CriticalExp { q, gamma, .. } => q + gamma,
        }
    }

    /// `α₀` for the exponential kind.
    pub fn alpha0(&self) -> Option<f64> {
        match *self {
            NonlinearitySpec::CriticalExp { alpha0, .. } => Some(alpha0),
            _ => None,
        }
    }

    /// Largest `|t|` whose exponent stays inside the overflow budget.
    pub fn overflow_radius(&self) -> f64 {
        match *self {
            NonlinearitySpec::SubcriticalPower { .. } => f64::INFINITY,
            NonlinearitySpec::CriticalExp { alpha0, gamma, .. } => (OVERFLOW_BUDGET / alpha0).powf(1.0 / gamma),
        }
    }

    fn exponent(&self, t: f64) -> Result<f64> {
        match *self {
            NonlinearitySpec::SubcriticalPower { .. } => Ok(0.0),
            NonlinearitySpec::CriticalExp { alpha0, gamma, .. } => {
                let x = alpha0 * t.abs().powf(gamma);
                if x > OVERFLOW_BUDGET || !x.is_finite() {
                    Err(LabError::Overflow(format!("alpha0 |t|^gamma = {x:.6e} at t = {t:.6e}")))
                } else {
                    Ok(x)
                }
            }
        }
    }

    pub fn f(&self, t: f64) -> Result<f64> {
        match *self {
            NonlinearitySpec::SubcriticalPower { theta, lambda } => Ok(lambda * t.abs().powf(theta - 2.0) * t),
            NonlinearitySpec::CriticalExp { q, lambda, .. } => {
                let x = self.exponent(t)?;
                Ok(lambda * t.signum() * t.abs().powf(q - 1.0) * x.exp_m1())
            }
        }
    }

    pub fn f_prime(&self, t: f64) -> Result<f64> {
        match *self {
            NonlinearitySpec::SubcriticalPower { theta, lambda } => Ok(lambda * (theta - 1.0) * t.abs().powf(theta - 2.0)),
            NonlinearitySpec::CriticalExp { alpha0, q, lambda, gamma } => {
                let x = self.exponent(t)?;
                let a = t.abs();
                Ok(lambda
                    * ((q - 1.0) * a.powf(q - 2.0) * x.exp_m1()
                        + alpha0 * gamma * a.powf(q + gamma - 2.0) * x.exp()))
            }
        }
    }

    /// `F(t) = ∫_0^t f`.
    pub fn big_f(&self, t: f64) -> Result<f64> {
        match *self {
            NonlinearitySpec::SubcriticalPower { theta, lambda } => Ok(lambda * t.abs().powf(theta) / theta),
            NonlinearitySpec::CriticalExp { q, lambda, gamma, .. } => {
                let x = self.exponent(t)?;
                if x == 0.0 {
                    return Ok(0.0);
                }
                // Σ_k x^k/k! |t|^q/(q + γk)
                let mut term = 1.0;
                let mut sum = 0.0;
                for k in 1..100_000 {
                    term *= x / k as f64;
                    let add = term / (q + gamma * k as f64);
                    sum += add;
                    if k as f64 > x && add <= 1e-17 * sum {
                        break;
                    }
                }
                let v = lambda * t.abs().powf(q) * sum;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(LabError::Overflow(format!("F({t:.6e}) is not finite")))
                }
            }
        }
    }

    /// `f(t) t e^{-α₀|t|^γ}`, evaluated without forming the exponential.
    pub fn h5_ratio(&self, t: f64) -> Option<f64> {
        match *self {
            NonlinearitySpec::SubcriticalPower { .. } => None,
            NonlinearitySpec::CriticalExp { alpha0, q, lambda, gamma } => {
                let x = alpha0 * t.abs().powf(gamma);
                Some(lambda * t.abs().powf(q) * -(-x).exp_m1())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn power_identity() {
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        for t in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            assert_relative_eq!(5.0 * s.big_f(t).unwrap(), t * s.f(t).unwrap(), max_relative = 1e-15);
        }
        assert_eq!(s.f(2.0).unwrap(), 16.0);
        assert_eq!(s.f(-2.0).unwrap(), -16.0);
    }

    #[test]
    fn exponential_primitive_matches_quadrature() {
        let s = NonlinearitySpec::critical(3.0, 2.0, 0.5, 4.0).unwrap();
        for t in [0.1, 0.5, 1.0, 1.5] {
            let v = crate::radial_core::quadrature::adaptive(|x| s.f(x).unwrap(), 0.0, t, 1e-13).unwrap();
            assert_relative_eq!(s.big_f(t).unwrap(), v, max_relative = 1e-11);
            assert_relative_eq!(s.big_f(-t).unwrap(), v, max_relative = 1e-11);
        }
        assert!(matches!(s.f(10.0), Err(LabError::Overflow(_))));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let s = NonlinearitySpec::critical(3.0, 2.5, 0.5, 4.0).unwrap();
        for t in [-1.1, -0.2, 0.3, 0.9] {
            let h = 1e-6;
            let fd = (s.f(t + h).unwrap() - s.f(t - h).unwrap()) / (2.0 * h);
            assert_relative_eq!(s.f_prime(t).unwrap(), fd, max_relative = 1e-7);
        }
    }

    proptest! {
        #[test]
        fn ambrosetti_rabinowitz_for_exponential(t in -1.2f64..1.2, q in 2.0f64..4.0) {
            let s = NonlinearitySpec::critical(2.0, q, 1.0, 4.0).unwrap();
            let theta = s.declared_theta();
            prop_assert!(theta * s.big_f(t).unwrap() <= t * s.f(t).unwrap() * (1.0 + 1e-12) + 1e-300);
        }
    }
}
