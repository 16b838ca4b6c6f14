use super::profile::AdamsProfile;
use crate::error::{LabError, Result};
use crate::functional_lab::Convention;
use crate::radial_core::quadrature::adaptive;
use crate::radial_core::{RadialProfile, WeightSpec};

const REL_TOL: f64 = 1e-12;

/// Contributions to `‖w_n‖^{N/2}`, each carrying the factor `2/N` so that the
/// main logarithmic term tends to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityParts {
    /// Weighted `|Δw_n|^{N/2}` on the cap, the logarithmic piece and the cutoff.
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    /// `|∇w_n|^{N/2}` on the same three pieces.
    pub i1p: f64,
    pub i2p: f64,
    pub i3p: f64,
    /// `|w_n|^{N/2}` on the same three pieces.
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl FidelityParts {
    pub fn sum(&self) -> f64 {
        self.i1 + self.i2 + self.i3 + self.i1p + self.i2p + self.i3p + self.l1 + self.l2 + self.l3
    }

    pub fn lebesgue(&self) -> f64 {
        self.l1 + self.l2 + self.l3
    }

    /// Named parts in column order.
    pub fn named(&self) -> [(&'static str, f64); 9] {
        [
            ("i1", self.i1),
            ("i2", self.i2),
            ("i3", self.i3),
            ("i1p", self.i1p),
            ("i2p", self.i2p),
            ("i3p", self.i3p),
            ("l1", self.l1),
            ("l2", self.l2),
            ("l3", self.l3),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub ln_n: f64,
    pub continuity_gap1: f64,
    pub continuity_gap2: f64,
    /// `‖w_n‖^{N/2}`.
    pub norm_total: f64,
    pub parts: FidelityParts,
    pub convention: Convention,
}

impl FidelityReport {
    /// `‖w_n‖`.
    pub fn norm(&self, dim: usize) -> f64 {
        self.norm_total.powf(2.0 / dim as f64)
    }
}

/// `∫_0^{b} r^{N-1} g dr` for `g = r^{a-N} h(ln r)`, written in `τ = ln(b/r)`
/// so that nothing overflows when `b` underflows.
fn cap_integral<H: Fn(f64) -> f64>(ln_b: f64, a: f64, h: H) -> Result<f64> {
    let span = 60.0 / a;
    let v = adaptive(|tau: f64| (-a * tau).exp() * h(ln_b - tau), 0.0, span, REL_TOL)?;
    Ok(v * (a * ln_b).exp())
}

/// `∫_{b1}^{1/2} r^{N-1} g dr` for `g = r^{-N} h(s)`, `s = ln(e/r)`, in `ln s`.
fn log_integral<H: Fn(f64) -> f64>(s_hi: f64, h: H) -> Result<f64> {
    let s_lo = 1.0 + std::f64::consts::LN_2;
    adaptive(
        |u: f64| {
            let s = u.exp();
            s * h(s)
        },
        s_lo.ln(),
        s_hi.ln(),
        REL_TOL,
    )
}

fn cutoff_integral<G: Fn(f64) -> f64>(dim: usize, g: G) -> Result<f64> {
    let n1 = dim as i32 - 1;
    adaptive(|r: f64| r.powi(n1) * g(r), 0.5, 1.0, REL_TOL)
}

/// Piecewise evaluation of `‖w_n‖^{N/2}` with analytic derivatives.
pub fn fidelity(profile: &AdamsProfile, weight: &WeightSpec) -> Result<FidelityReport> {
    let dim = profile.dim;
    if weight.dim() != dim {
        return Err(LabError::param("weight", "weight dimension differs from the profile's"));
    }
    let n = dim as f64;
    let p = n / 2.0;
    let beta = profile.beta;
    let one_b = 1.0 - beta;
    let e_w = weight.core_exponent();
    let scale = crate::functional_lab::sphere_area(dim) * 2.0 / n;
    let ln_b1 = -profile.index.ln() / n;
    let pw = |x: f64| x.abs().powf(p);

    // cap: Δw = -A r^{-2β}, w' = -B r^{1-2β}
    let b = one_b * profile.cap_coeff();
    let a = b * (n - 2.0 * beta);
    let i1 = cap_integral(ln_b1, n * one_b, |lr| (1.0 - lr).powf(e_w) * pw(a))?;
    let i1p = cap_integral(ln_b1, n + p * (1.0 - 2.0 * beta), |_| pw(b))?;
    let top = profile.c0 * (profile.log_scale.powf(1.0 / profile.gamma) + profile.cap_shift);
    let half = 0.5 * profile.cap_coeff();
    let l1 = cap_integral(ln_b1, n, |lr| pw(top - half * (2.0 * one_b * lr).exp()))?;

    // logarithmic piece: w = k s^{1-β}
    let k = profile.log_coeff();
    let s_hi = profile.log_scale;
    let i2 = log_integral(s_hi, |s| {
        s.powf(e_w) * pw(k * one_b * s.powf(-beta) * ((n - 2.0) + beta / s))
    })?;
    let i2p = log_integral(s_hi, |s| (p * (1.0 - s)).exp() * pw(k * one_b * s.powf(-beta)))?;
    let l2 = log_integral(s_hi, |s| (n * (1.0 - s)).exp() * pw(k * s.powf(one_b)))?;

    let w = |r: f64| weight.value(r);
    let i3 = cutoff_integral(dim, |r| w(r) * pw(profile.cutoff_laplacian(r)))?;
    let i3p = cutoff_integral(dim, |r| pw(RadialProfile::derivative(profile, r)))?;
    let l3 = cutoff_integral(dim, |r| pw(RadialProfile::value(profile, r)))?;

    let parts = FidelityParts {
        i1: scale * i1,
        i2: scale * i2,
        i3: scale * i3,
        i1p: scale * i1p,
        i2p: scale * i2p,
        i3p: scale * i3p,
        l1: scale * l1,
        l2: scale * l2,
        l3: scale * l3,
    };
    if let Some((name, v)) = parts.named().into_iter().find(|(_, v)| !v.is_finite()) {
        return Err(LabError::Quadrature(format!("part {name} is not finite ({v})")));
    }
    Ok(FidelityReport {
        ln_n: profile.index.ln(),
        continuity_gap1: profile.continuity_gap1(),
        continuity_gap2: profile.continuity_gap2(),
        norm_total: parts.sum(),
        parts,
        convention: profile.convention,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adams_sequence::{CapVariant, SequenceIndex};
    use crate::functional_lab::constants;
    use crate::radial_core::Tail;
    use approx::assert_relative_eq;

    fn setup(n: f64) -> (AdamsProfile, WeightSpec) {
        let c = constants(4, 0.5).unwrap();
        let p = AdamsProfile::new(SequenceIndex::new(n).unwrap(), &c, Convention::General, CapVariant::Continuous)
            .unwrap();
        (p, WeightSpec::new(4, 0.5, Tail::constant(), 1.0).unwrap())
    }

    #[test]
    fn parts_are_nonnegative_and_sum() {
        let (p, w) = setup(1e3);
        let rep = fidelity(&p, &w).unwrap();
        assert!(rep.parts.named().iter().all(|(_, v)| *v >= 0.0));
        assert_relative_eq!(rep.norm_total, rep.parts.sum(), max_relative = 1e-15);
    }

    #[test]
    fn cap_gradient_part_in_closed_form() {
        // |w'|^2 r^3 = (c0 (1-β) / L^{3/4})^2 r^3 for β = 1/2, N = 4
        let (p, w) = setup(1e4);
        let rep = fidelity(&p, &w).unwrap();
        let a = p.c0 * 0.5 / p.log_scale.powf(0.75);
        let exact = 2.0 * std::f64::consts::PI.powi(2) * 0.5 * a * a * p.break1.powi(4) / 4.0;
        assert_relative_eq!(rep.parts.i1p, exact, max_relative = 1e-11);
    }

    #[test]
    fn logarithmic_main_term_in_closed_form() {
        // for N = 4, β = 1/2: r^3 w |Δw|^2 = k^2/4 · s^{-1/2}(2 + 1/(2s))^2 / r
        let (p, w) = setup(1e6);
        let rep = fidelity(&p, &w).unwrap();
        let k = p.c0 * p.log_scale.powf(-0.25);
        // ∫ s^{-1/2}(4 + 2/s + 1/(4 s^2)) ds = 8√s - 4 s^{-1/2} - (1/6) s^{-3/2}
        let anti_exact = |s: f64| 8.0 * s.sqrt() - 4.0 / s.sqrt() - s.powf(-1.5) / 6.0;
        let s_lo = 1.0 + 2f64.ln();
        let exact = 2.0 * std::f64::consts::PI.powi(2) * 0.5 * k * k / 4.0 * (anti_exact(p.log_scale) - anti_exact(s_lo));
        assert_relative_eq!(rep.parts.i2, exact, max_relative = 1e-11);
    }
}
