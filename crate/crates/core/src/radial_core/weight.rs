use crate::error::{LabError, Result};

/// Tail `χ` of the weight on `|x| ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    /// Piecewise-linear table through `(t_i, χ_i)`, constant past the last knot.
    /// The first knot must be `(1, 1)`.
    Bounded { knots: Vec<(f64, f64)> },
    /// `χ(t) = t^δ`.
    Power { delta: f64 },
    /// `χ(t) = 1 + (ln t)^σ`.
    Log { sigma: f64 },
}

impl Tail {
    /// `χ ≡ 1`.
    pub fn constant() -> Self {
        Tail::Bounded {
            knots: vec![(1.0, 1.0)],
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Tail::Bounded { knots } => {
                let last = knots[knots.len() - 1];
                if t >= last.0 {
                    return last.1;
                }
                let j = knots.partition_point(|k| k.0 <= t).max(1);
                let (a, fa) = knots[j - 1];
                let (b, fb) = knots[j];
                fa + (fb - fa) * (t - a) / (b - a)
            }
            Tail::Power { delta } => t.powf(*delta),
            Tail::Log { sigma } => 1.0 + t.ln().max(0.0).powf(*sigma),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Tail::Bounded { knots } => {
                if knots.first() != Some(&(1.0, 1.0)) {
                    return Err(LabError::param("tail", "table must start at (1, 1)"));
                }
                if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(LabError::param("tail", "table abscissae must increase"));
                }
                if knots.iter().any(|k| !(k.1.is_finite() && k.1 >= 1.0 && k.0.is_finite())) {
                    return Err(LabError::param("tail", "table values must be finite and >= 1"));
                }
            }
            Tail::Power { delta } => {
                if !(delta.is_finite() && *delta > 0.0) {
                    return Err(LabError::param("delta", format!("must be positive, got {delta}")));
                }
            }
            Tail::Log { sigma } => {
                if !(sigma.is_finite() && *sigma > 1.0) {
                    return Err(LabError::param("sigma", format!("must exceed 1, got {sigma}")));
                }
            }
        }
        Ok(())
    }

    /// Breakpoints of `χ` in `(lo, hi)`, used to split quadratures.
    pub(crate) fn kinks(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            Tail::Bounded { knots } => knots.iter().map(|k| k.0).filter(|&t| t > lo && t < hi).collect(),
            _ => Vec::new(),
        }
    }
}

/// Admissible `β` interval `((N²-4N+2)/(N(N-2)), 1)`.
pub fn beta_interval(dim: usize) -> (f64, f64) {
    let n = dim as f64;
    ((n * n - 4.0 * n + 2.0) / (n * (n - 2.0)), 1.0)
}

/// The weight `w_β`: `(ln(e/r))^{β(N/2-1)}` on `r < 1` and `χ(r)` beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec {
    dim: usize,
    beta: f64,
    core_exponent: f64,
    tail: Tail,
    m: f64,
}

impl WeightSpec {
    pub fn new(dim: usize, beta: f64, tail: Tail, m: f64) -> Result<Self> {
        if dim < 4 {
            return Err(LabError::InvalidDimension(dim));
        }
        let (lo, hi) = beta_interval(dim);
        if !(beta > lo && beta < hi) {
            return Err(LabError::param(
                "beta",
                format!("beta = {beta} outside ({lo}, {hi}) for N = {dim}"),
            ));
        }
        if !(m.is_finite() && m > 0.0) {
            return Err(LabError::param("M", format!("must be positive, got {m}")));
        }
        tail.validate()?;
        Ok(WeightSpec {
            dim,
            beta,
            core_exponent: beta * (dim as f64 / 2.0 - 1.0),
            tail,
            m,
        })
    }

    /// The constant weight `w ≡ 1`. Not an admissible `w_β`; for testing.
    pub fn unit(dim: usize) -> Self {
        WeightSpec {
            dim,
            beta: 0.0,
            core_exponent: 0.0,
            tail: Tail::constant(),
            m: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Exponent `β(N/2-1)` of the logarithmic core.
    pub fn core_exponent(&self) -> f64 {
        self.core_exponent
    }

    /// Unchecked evaluation; `r` must be positive.
    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        if r < 1.0 {
            (1.0 - r.ln()).powf(self.core_exponent)
        } else {
            self.tail.eval(r)
        }
    }
}

pub fn weight_eval(spec: &WeightSpec, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(LabError::param("r", format!("weight needs r > 0, got {r}")));
    }
    Ok(spec.value(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn spec(tail: Tail) -> WeightSpec {
        WeightSpec::new(4, 0.5, tail, 1.0).unwrap()
    }

    #[test]
    fn seam_and_sample_values() {
        for tail in [Tail::constant(), Tail::Power { delta: 1.0 }, Tail::Log { sigma: 2.0 }] {
            assert_eq!(weight_eval(&spec(tail), 1.0).unwrap(), 1.0);
        }
        let w = spec(Tail::constant());
        assert_relative_eq!(weight_eval(&w, (-1.0f64).exp()).unwrap(), 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(weight_eval(&spec(Tail::Power { delta: 1.0 }), 4.0).unwrap(), 4.0);
        assert!(weight_eval(&w, 0.0).is_err());
        assert!(weight_eval(&w, -1.0).is_err());
    }

    #[test]
    fn beta_window() {
        let (lo, hi) = beta_interval(4);
        assert_relative_eq!(lo, 0.25);
        assert_eq!(hi, 1.0);
        assert!(WeightSpec::new(4, 0.25, Tail::constant(), 1.0).is_err());
        assert!(WeightSpec::new(4, 1.0, Tail::constant(), 1.0).is_err());
        assert!(WeightSpec::new(3, 0.5, Tail::constant(), 1.0).is_err());
    }

    #[test]
    fn table_tail() {
        let t = Tail::Bounded {
            knots: vec![(1.0, 1.0), (2.0, 3.0), (4.0, 2.0)],
        };
        let w = spec(t);
        assert_relative_eq!(w.value(1.5), 2.0);
        assert_relative_eq!(w.value(3.0), 2.5);
        assert_eq!(w.value(100.0), 2.0);
        let bad = Tail::Bounded {
            knots: vec![(1.0, 1.0), (2.0, 0.5)],
        };
        assert!(WeightSpec::new(4, 0.5, bad, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn weight_is_at_least_one(
            r in 1e-8f64..1e4,
            beta in 0.2501f64..0.9999,
            pick in 0usize..3,
            p in 0.01f64..3.0,
        ) {
            let tail = match pick {
                0 => Tail::Bounded { knots: vec![(1.0, 1.0), (5.0, 1.0 + p)] },
                1 => Tail::Power { delta: p },
                _ => Tail::Log { sigma: 1.0 + p },
            };
            let w = WeightSpec::new(4, beta, tail, 1.0).unwrap();
            prop_assert!(weight_eval(&w, r).unwrap() >= 1.0);
        }
    }
}
