use std::sync::Arc;

use crate::error::{LabError, Result};
use crate::functional_lab::{Convention, SobolevConstants};
use crate::radial_core::{RadialFunction, RadialGrid, RadialProfile};

/// Index `n` of the sequence, stored as `ln n` so that astronomically large
/// members stay representable.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SequenceIndex {
    ln_n: f64,
}

impl SequenceIndex {
    pub fn new(n: f64) -> Result<Self> {
        if !(n.is_finite() && n > 0.0) {
            return Err(LabError::param("n", format!("must be positive and finite, got {n}")));
        }
        Ok(SequenceIndex { ln_n: n.ln() })
    }

    pub fn from_ln(ln_n: f64) -> Result<Self> {
        if !ln_n.is_finite() {
            return Err(LabError::param("n", format!("ln n must be finite, got {ln_n}")));
        }
        Ok(SequenceIndex { ln_n })
    }

    pub fn ln(&self) -> f64 {
        self.ln_n
    }

    /// `n` itself; `+∞` beyond the `f64` range.
    pub fn value(&self) -> f64 {
        self.ln_n.exp()
    }

    pub fn log10(&self) -> f64 {
        self.ln_n / std::f64::consts::LN_10
    }
}

/// Third term of the cap piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CapVariant {
    /// `1 / (2 α^{1/γ} (1/n)^{2(1-β)/N} L^{(γ-1)/γ})`, as written.
    #[default]
    Printed,
    /// Chosen so that the cap meets the logarithmic piece at `n^{-1/N}`.
    Continuous,
}

impl CapVariant {
    pub fn name(self) -> &'static str {
        match self {
            CapVariant::Printed => "printed",
            CapVariant::Continuous => "continuous",
        }
    }
}

impl std::str::FromStr for CapVariant {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(CapVariant::Printed),
            "continuous" => Ok(CapVariant::Continuous),
            _ => Err(LabError::param("cap", format!("unknown cap variant `{s}`"))),
        }
    }
}

/// Which formula is active at a radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Cap,
    Log,
    Cutoff,
    Outside,
}

/// The concentrating function `w_n`: a cap on `[0, n^{-1/N}]`, the
/// logarithmic profile up to `1/2`, and a cubic cutoff vanishing to first
/// order at `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamsProfile {
    pub index: SequenceIndex,
    pub dim: usize,
    pub beta: f64,
    pub gamma: f64,
    pub convention: Convention,
    pub variant: CapVariant,
    pub alpha_beta: f64,
    /// `C(N,β) = (1/2)^{2/N} α_β^{1/γ} / (V_N^{2/N} (1-β)^{1-2/N} (N-2))`.
    pub c_const: f64,
    /// `C(N,β) α_β^{-1/γ}`; every piece is proportional to it.
    pub c0: f64,
    /// `ln(e n^{1/N})`.
    pub log_scale: f64,
    pub break1: f64,
    pub break2: f64,
    /// Third cap term divided by `c0`.
    pub cap_shift: f64,
    /// Coefficients of `w_n` on `[1/2, 1]` in powers of `r - 1/2`.
    pub cutoff: [f64; 4],
}

impl AdamsProfile {
    pub fn new(
        index: SequenceIndex,
        consts: &SobolevConstants,
        convention: Convention,
        variant: CapVariant,
    ) -> Result<Self> {
        let dim = consts.dim;
        let n = dim as f64;
        if index.ln() <= n * std::f64::consts::LN_2 {
            return Err(LabError::param(
                "n",
                format!("need n > 2^N = {}, got n = {}", 2f64.powi(dim as i32), index.value()),
            ));
        }
        let alpha_beta = consts.alpha_beta(convention)?;
        let beta = consts.beta;
        let gamma = consts.gamma;
        let one_b = 1.0 - beta;
        let c_const = 0.5f64.powf(2.0 / n) * alpha_beta.powf(1.0 / gamma)
            / (consts.v_n.powf(2.0 / n) * one_b.powf(1.0 - 2.0 / n) * (n - 2.0));
        let c0 = 0.5f64.powf(2.0 / n) / (consts.v_n.powf(2.0 / n) * one_b.powf(1.0 - 2.0 / n) * (n - 2.0));
        let log_scale = 1.0 + index.ln() / n;
        let break1 = (-index.ln() / n).exp();
        let cap_exp = 2.0 * one_b / n * index.ln();
        let cap_shift = match variant {
            CapVariant::Printed => {
                if cap_exp > 700.0 {
                    return Err(LabError::Overflow(format!(
                        "printed cap term n^(2(1-beta)/N) = e^{cap_exp:.3e} is not representable"
                    )));
                }
                cap_exp.exp()
            }
            CapVariant::Continuous => (-cap_exp).exp(),
        } / (2.0 * log_scale.powf((gamma - 1.0) / gamma));
        let mut p = AdamsProfile {
            index,
            dim,
            beta,
            gamma,
            convention,
            variant,
            alpha_beta,
            c_const,
            c0,
            log_scale,
            break1,
            break2: 0.5,
            cap_shift,
            cutoff: [0.0; 4],
        };
        let h = 0.5;
        let y0 = p.log_value(h);
        let m0 = p.log_derivative(h);
        p.cutoff = [
            y0,
            m0,
            (-3.0 * y0 / h - 2.0 * m0) / h,
            (m0 + 2.0 * y0 / h) / (h * h),
        ];
        Ok(p)
    }

    /// Prefactor `c0 L^{-2(1-β)/N}` of the logarithmic piece.
    pub(crate) fn log_coeff(&self) -> f64 {
        self.c0 * self.log_scale.powf(-2.0 * (1.0 - self.beta) / self.dim as f64)
    }

    /// Prefactor `c0 / L^{(γ-1)/γ}` of the `r^{2(1-β)}` cap term.
    pub(crate) fn cap_coeff(&self) -> f64 {
        self.c0 / self.log_scale.powf((self.gamma - 1.0) / self.gamma)
    }

    pub fn piece(&self, r: f64) -> Piece {
        if r <= self.break1 {
            Piece::Cap
        } else if r <= self.break2 {
            Piece::Log
        } else if r < 1.0 {
            Piece::Cutoff
        } else {
            Piece::Outside
        }
    }

    pub fn cap_value(&self, r: f64) -> f64 {
        self.c0 * self.log_scale.powf(1.0 / self.gamma) - 0.5 * self.cap_coeff() * r.powf(2.0 * (1.0 - self.beta))
            + self.c0 * self.cap_shift
    }

    pub fn cap_derivative(&self, r: f64) -> f64 {
        -(1.0 - self.beta) * self.cap_coeff() * r.powf(1.0 - 2.0 * self.beta)
    }

    pub fn cap_second(&self, r: f64) -> f64 {
        -(1.0 - self.beta) * (1.0 - 2.0 * self.beta) * self.cap_coeff() * r.powf(-2.0 * self.beta)
    }

    pub fn cap_laplacian(&self, r: f64) -> f64 {
        -(1.0 - self.beta) * (self.dim as f64 - 2.0 * self.beta) * self.cap_coeff() * r.powf(-2.0 * self.beta)
    }

    pub fn log_value(&self, r: f64) -> f64 {
        self.log_coeff() * (1.0 - r.ln()).powf(1.0 - self.beta)
    }

    pub fn log_derivative(&self, r: f64) -> f64 {
        let s = 1.0 - r.ln();
        -self.log_coeff() * (1.0 - self.beta) * s.powf(-self.beta) / r
    }

    pub fn log_second(&self, r: f64) -> f64 {
        let s = 1.0 - r.ln();
        self.log_coeff() * (1.0 - self.beta) * s.powf(-self.beta) * (1.0 - self.beta / s) / (r * r)
    }

    pub fn log_laplacian(&self, r: f64) -> f64 {
        let s = 1.0 - r.ln();
        let n = self.dim as f64;
        -self.log_coeff() * (1.0 - self.beta) * s.powf(-self.beta) * ((n - 2.0) + self.beta / s) / (r * r)
    }

    fn cutoff_eval(&self, r: f64) -> (f64, f64, f64) {
        let t = r - 0.5;
        let [a0, a1, a2, a3] = self.cutoff;
        (
            a0 + t * (a1 + t * (a2 + t * a3)),
            a1 + t * (2.0 * a2 + 3.0 * t * a3),
            2.0 * a2 + 6.0 * t * a3,
        )
    }

    /// `ζ_n = w_n / C(N,β)` on `[1/2, 1]`, zero beyond.
    pub fn zeta(&self, r: f64) -> f64 {
        if r >= 1.0 {
            0.0
        } else {
            self.cutoff_eval(r).0 / self.c_const
        }
    }

    /// `∂_r ζ_n` on `[1/2, 1]`, zero beyond.
    pub fn zeta_derivative(&self, r: f64) -> f64 {
        if r >= 1.0 {
            0.0
        } else {
            self.cutoff_eval(r).1 / self.c_const
        }
    }

    pub fn cutoff_laplacian(&self, r: f64) -> f64 {
        let (_, d, s) = self.cutoff_eval(r);
        s + (self.dim as f64 - 1.0) * d / r
    }

    /// Jump `cap(n^{-1/N}) - log(n^{-1/N})`.
    pub fn continuity_gap1(&self) -> f64 {
        self.cap_value(self.break1) - self.log_value(self.break1)
    }

    /// Jump `log(1/2) - cutoff(1/2)`.
    pub fn continuity_gap2(&self) -> f64 {
        self.log_value(0.5) - self.cutoff_eval(0.5).0
    }

    /// `C(N,β)(ln(e n^{1/N}) / α_β)^{1/γ}`, the lower bound for the cap.
    pub fn cap_floor(&self) -> f64 {
        self.c0 * self.log_scale.powf(1.0 / self.gamma)
    }

    pub fn laplacian(&self, r: f64) -> f64 {
        match self.piece(r) {
            Piece::Cap => self.cap_laplacian(r),
            Piece::Log => self.log_laplacian(r),
            Piece::Cutoff => self.cutoff_laplacian(r),
            Piece::Outside => 0.0,
        }
    }

    /// Samples on `grid`, keeping this profile as the analytic form.
    pub fn on_grid(&self, grid: Arc<RadialGrid>) -> Result<RadialFunction> {
        if grid.dim() != self.dim {
            return Err(LabError::param("grid", "grid dimension differs from the profile's"));
        }
        RadialFunction::from_profile(grid, Arc::new(self.clone()))
    }
}

impl RadialProfile for AdamsProfile {
    fn value(&self, r: f64) -> f64 {
        match self.piece(r) {
            Piece::Cap => self.cap_value(r),
            Piece::Log => self.log_value(r),
            Piece::Cutoff => self.cutoff_eval(r).0,
            Piece::Outside => 0.0,
        }
    }

    fn derivative(&self, r: f64) -> f64 {
        match self.piece(r) {
            Piece::Cap => self.cap_derivative(r),
            Piece::Log => self.log_derivative(r),
            Piece::Cutoff => self.cutoff_eval(r).1,
            Piece::Outside => 0.0,
        }
    }

    fn second_derivative(&self, r: f64) -> f64 {
        match self.piece(r) {
            Piece::Cap => self.cap_second(r),
            Piece::Log => self.log_second(r),
            Piece::Cutoff => self.cutoff_eval(r).2,
            Piece::Outside => 0.0,
        }
    }
}

/// Grid on `[0, 2]` whose inner segment reaches well below `n^{-1/N}`.
pub fn default_grid(dim: usize, index: SequenceIndex) -> Result<Arc<RadialGrid>> {
    let depth = (index.ln() / dim as f64 + 8.0).max(crate::radial_core::DEFAULT_INNER_DEPTH);
    let inner = ((depth * 24.0) as usize).max(256);
    Ok(Arc::new(RadialGrid::with_inner_depth(dim, 2.0, inner, 64, depth)?))
}

/// `w_n` together with its samples on [`default_grid`].
pub fn adams_fn(
    n: f64,
    consts: &SobolevConstants,
    convention: Convention,
    variant: CapVariant,
) -> Result<(AdamsProfile, RadialFunction)> {
    let index = SequenceIndex::new(n)?;
    let profile = AdamsProfile::new(index, consts, convention, variant)?;
    let u = profile.on_grid(default_grid(consts.dim, index)?)?;
    Ok((profile, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional_lab::constants;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn profile(n: f64, variant: CapVariant) -> AdamsProfile {
        let c = constants(4, 0.5).unwrap();
        AdamsProfile::new(SequenceIndex::new(n).unwrap(), &c, Convention::General, variant).unwrap()
    }

    #[test]
    fn boundary_values() {
        let p = profile(1e3, CapVariant::Printed);
        assert_eq!(p.value(1.0), 0.0);
        assert!(p.derivative(1.0 - 1e-12).abs() < 1e-9);
        let l = p.log_scale;
        let expected = p.alpha_beta.powf(-1.0 / p.gamma) * l.powf(-0.5 * 0.5) * (2f64.ln() + 1.0).powf(0.5) * p.c_const;
        assert_relative_eq!(p.value(0.5), expected, max_relative = 1e-12);
        let zeta_prime = -2.0 * 0.5 / (p.alpha_beta.powf(1.0 / p.gamma) * l.powf(0.25)) * (2f64.ln() + 1.0).powf(-0.5);
        assert_relative_eq!(p.zeta_derivative(0.5), zeta_prime, max_relative = 1e-12);
        assert!(p.continuity_gap2().abs() < 1e-14);
    }

    #[test]
    fn gaps_by_variant() {
        assert!(profile(1e5, CapVariant::Continuous).continuity_gap1().abs() < 1e-12);
        assert!(profile(1e5, CapVariant::Printed).continuity_gap1() > 0.1);
    }

    #[test]
    fn convention_does_not_change_the_function() {
        let c = constants(4, 0.5).unwrap();
        let idx = SequenceIndex::new(1e4).unwrap();
        let a = AdamsProfile::new(idx, &c, Convention::General, CapVariant::Printed).unwrap();
        let b = AdamsProfile::new(idx, &c, Convention::FourDim, CapVariant::Printed).unwrap();
        for r in [1e-3, 0.05, 0.3, 0.7] {
            assert_relative_eq!(a.value(r), b.value(r), max_relative = 1e-13);
        }
        assert!(b.c_const > a.c_const);
    }

    #[test]
    fn index_constraints() {
        let c = constants(4, 0.5).unwrap();
        let bad = SequenceIndex::new(16.0).unwrap();
        assert!(AdamsProfile::new(bad, &c, Convention::General, CapVariant::Printed).is_err());
        let huge = SequenceIndex::from_ln(1e5).unwrap();
        assert!(matches!(
            AdamsProfile::new(huge, &c, Convention::General, CapVariant::Printed),
            Err(LabError::Overflow(_))
        ));
        assert!(AdamsProfile::new(huge, &c, Convention::General, CapVariant::Continuous).is_ok());
    }

    #[test]
    fn laplacian_matches_derivatives() {
        let p = profile(1e6, CapVariant::Continuous);
        for r in [1e-3, 0.02, 0.2, 0.45, 0.6, 0.9] {
            let lap = p.second_derivative(r) + 3.0 * p.derivative(r) / r;
            assert_relative_eq!(p.laplacian(r), lap, max_relative = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn nonnegative_with_cap_floor(log10n in 1.3f64..12.0, r in 0.0f64..1.5, printed in any::<bool>()) {
            let variant = if printed { CapVariant::Printed } else { CapVariant::Continuous };
            let p = profile(10f64.powf(log10n), variant);
            prop_assert!(p.value(r) >= 0.0);
            if r >= 1.0 {
                prop_assert_eq!(p.value(r), 0.0);
            }
            let rc = r.min(1.0) * p.break1;
            prop_assert!(p.value(rc) >= p.cap_floor() * (1.0 - 1e-12));
        }
    }
}
