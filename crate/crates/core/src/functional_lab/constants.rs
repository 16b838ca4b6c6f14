use std::f64::consts::PI;

use crate::error::{LabError, Result};
use crate::radial_core::beta_interval;

/// Volume of the unit ball in `R^N`.
pub fn unit_ball_volume(dim: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_N = 2π/N V_{N-2}
    let mut v = if dim % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if dim % 2 == 0 { 2 } else { 3 };
    while k <= dim {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v
}

/// Area `ω_{N-1} = N V_N` of the unit sphere in `R^N`.
pub fn sphere_area(dim: usize) -> f64 {
    dim as f64 * unit_ball_volume(dim)
}

/// Which closed form of the sharp exponent to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Convention {
    /// `N[(N-2) N V_N]^{2/((N-2)(1-β))} (1-β)^{1/(1-β)}`.
    General,
    /// `4[8π²(1-β)]^{1/(1-β)}`, four dimensions only.
    FourDim,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::General, Convention::FourDim];

    pub fn name(self) -> &'static str {
        match self {
            Convention::General => "general",
            Convention::FourDim => "fourdim",
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Convention {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(Convention::General),
            "fourdim" => Ok(Convention::FourDim),
            _ => Err(LabError::param("convention", format!("unknown convention `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevConstants {
    pub dim: usize,
    pub beta: f64,
    /// `N / ((N-2)(1-β))`.
    pub gamma: f64,
    pub alpha_beta_general: f64,
    /// `None` unless `N = 4`.
    pub alpha_beta_fourdim: Option<f64>,
    pub v_n: f64,
    pub omega: f64,
}

impl SobolevConstants {
    pub fn alpha_beta(&self, convention: Convention) -> Result<f64> {
        match convention {
            Convention::General => Ok(self.alpha_beta_general),
            Convention::FourDim => self.alpha_beta_fourdim.ok_or_else(|| {
                LabError::param("convention", format!("fourdim needs N = 4, got N = {}", self.dim))
            }),
        }
    }

    /// `β` lies in the admissible interval for this `N`.
    pub fn admissible(&self) -> bool {
        let (lo, hi) = beta_interval(self.dim);
        self.beta > lo && self.beta < hi
    }
}

/// Closed-form constants for even `N ≥ 4` and admissible `β`.
pub fn constants(dim: usize, beta: f64) -> Result<SobolevConstants> {
    if dim < 4 || dim % 2 != 0 {
        return Err(LabError::InvalidDimension(dim));
    }
    let (lo, hi) = beta_interval(dim);
    if !(beta > lo && beta < hi) {
        return Err(LabError::param(
            "beta",
            format!("beta = {beta} outside ({lo}, {hi}) for N = {dim}"),
        ));
    }
    constants_unchecked(dim, beta)
}

/// The same closed forms for any `β ∈ (0, 1)`, e.g. to follow limits outside
/// the admissible window.
pub fn constants_unchecked(dim: usize, beta: f64) -> Result<SobolevConstants> {
    if dim < 4 {
        return Err(LabError::InvalidDimension(dim));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(LabError::param("beta", format!("closed forms need 0 < beta < 1, got {beta}")));
    }
    let n = dim as f64;
    let v_n = unit_ball_volume(dim);
    let omega = n * v_n;
    let one_b = 1.0 - beta;
    let gamma = n / ((n - 2.0) * one_b);
    let alpha_beta_general =
        n * ((n - 2.0) * n * v_n).powf(2.0 / ((n - 2.0) * one_b)) * one_b.powf(1.0 / one_b);
    let alpha_beta_fourdim = (dim == 4).then(|| 4.0 * (8.0 * PI * PI * one_b).powf(1.0 / one_b));
    Ok(SobolevConstants {
        dim,
        beta,
        gamma,
        alpha_beta_general,
        alpha_beta_fourdim,
        v_n,
        omega,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2), PI, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(4), PI * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(sphere_area(4), 2.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(unit_ball_volume(6), PI.powi(3) / 6.0, max_relative = 1e-15);
    }

    #[test]
    fn four_dimensional_values() {
        let c = constants(4, 0.5).unwrap();
        assert_eq!(c.gamma, 4.0);
        assert_relative_eq!(c.alpha_beta_general, 16.0 * PI.powi(4), max_relative = 1e-14);
        assert_relative_eq!(c.alpha_beta_fourdim.unwrap(), 64.0 * PI.powi(4), max_relative = 1e-14);
    }

    #[test]
    fn fourdim_limit_at_small_beta() {
        let c = constants_unchecked(4, 1e-6).unwrap();
        assert!(!c.admissible());
        assert_relative_eq!(c.alpha_beta_fourdim.unwrap(), 32.0 * PI * PI, max_relative = 1e-3);
        assert_relative_eq!(c.gamma, 2.0, max_relative = 1e-5);
    }

    #[test]
    fn validation() {
        assert!(constants(4, 0.25).is_err());
        assert!(constants(4, 1.0).is_err());
        assert!(constants(5, 0.5).is_err());
        assert!(constants(6, 0.7).unwrap().alpha_beta_fourdim.is_none());
        assert!(constants(6, 0.7).unwrap().alpha_beta(Convention::FourDim).is_err());
        assert!(constants_unchecked(4, 0.0).is_err());
    }

    #[test]
    fn sweep_is_continuous() {
        let (lo, hi) = (beta_interval(4).0, 0.9);
        let diffs = |m: usize| {
            let vals: Vec<f64> = (1..m)
                .map(|k| constants(4, lo + (hi - lo) * k as f64 / m as f64).unwrap().alpha_beta_general.ln())
                .collect();
            vals.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
        };
        assert!(diffs(200) < 0.6 * diffs(100));
    }
}
