use crate::error::{LabError, Result};
use crate::radial_core::{gradient_radial, laplacian_radial, quad_radial_with, RadialFunction, WeightSpec};

/// The three `N/2`-power integrals making up `‖u‖^{N/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBreakdown {
    /// `∫ w_β |Δu|^{N/2}`.
    pub bil_term: f64,
    /// `∫ |∇u|^{N/2}`.
    pub grad_term: f64,
    /// `∫ |u|^{N/2}`.
    pub lp_term: f64,
    pub total: f64,
    /// `total^{2/N}`.
    pub norm: f64,
}

impl NormBreakdown {
    pub fn from_terms(dim: usize, bil_term: f64, grad_term: f64, lp_term: f64) -> Self {
        let total = bil_term + grad_term + lp_term;
        NormBreakdown {
            bil_term,
            grad_term,
            lp_term,
            total,
            norm: total.powf(2.0 / dim as f64),
        }
    }
}

/// `∫|u|^p` over the whole grid.
pub(crate) fn lebesgue_power(u: &RadialFunction, p: f64) -> Result<f64> {
    quad_radial_with(u, 0.0, u.grid().radius(), |_, v| v.abs().powf(p))
}

/// Weighted norm of `u` on its grid. Derivatives are analytic when `u`
/// carries a profile and finite differences otherwise.
pub fn e_norm(u: &RadialFunction, spec: &WeightSpec) -> Result<NormBreakdown> {
    let dim = u.dim();
    if spec.dim() != dim {
        return Err(LabError::param(
            "weight",
            format!("weight is for N = {}, function for N = {dim}", spec.dim()),
        ));
    }
    let p = dim as f64 / 2.0;
    let r_max = u.grid().radius();
    let lap = laplacian_radial(u)?;
    let grad = gradient_radial(u)?;
    let bil = quad_radial_with(&lap, 0.0, r_max, |r, v| spec.value(r) * v.abs().powf(p))?;
    let gr = quad_radial_with(&grad, 0.0, r_max, |_, v| v.abs().powf(p))?;
    let lp = lebesgue_power(u, p)?;
    Ok(NormBreakdown::from_terms(dim, bil, gr, lp))
}
