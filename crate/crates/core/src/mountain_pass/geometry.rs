use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::energy::{EnergyModel, CLAMPED};
use super::nonlinearity::NonlinearitySpec;
use crate::error::{LabError, Result};
use crate::radial_core::{RadialFunction, RadialGrid, WeightSpec};

/// Witness of the mountain-pass shape of `𝒥`.
#[derive(Debug, Clone)]
pub struct GeometryCertificate {
    pub rho: f64,
    /// Smallest sampled `𝒥` on `‖u‖ = ρ`.
    pub ring_min: f64,
    /// `𝒥(t_neg φ₁) < 0`.
    pub t_neg: f64,
    pub j_neg: f64,
    /// Unit-norm bump.
    pub phi1: RadialFunction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryOptions {
    pub directions: usize,
    pub seed: u64,
    /// First radius of the scan; the scan climbs 24 quarter decades from here.
    pub rho_min: f64,
    /// Largest admissible `Σ q F(ρv) / ((2/N)ρ^{N/2})` on the ring.
    pub potential_share: f64,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        GeometryOptions {
            directions: 8,
            seed: 0x5eed,
            rho_min: 1e-2,
            potential_share: 0.01,
        }
    }
}

fn cutoff(r: f64, r_max: f64) -> f64 {
    (1.0 - (r / r_max).powi(2)).powi(2)
}

fn unit(model: &EnergyModel, mut v: Vec<f64>) -> Result<Vec<f64>> {
    let m = v.len();
    v[m - CLAMPED..].iter_mut().for_each(|x| *x = 0.0);
    let n = model.norm(&v)?;
    if !(n > 0.0 && n.is_finite()) {
        return Err(LabError::ZeroNorm("geometry direction"));
    }
    Ok(v.into_iter().map(|x| x / n).collect())
}

/// `e^{-r²/2}` tapered to vanish at `R`, scaled to unit norm.
pub(crate) fn phi1_values(model: &EnergyModel) -> Result<Vec<f64>> {
    let r_max = model.grid().radius();
    unit(model, model.grid().nodes().iter().map(|&r| (-r * r / 2.0).exp() * cutoff(r, r_max)).collect())
}

fn directions(model: &EnergyModel, opts: &GeometryOptions) -> Result<Vec<Vec<f64>>> {
    let grid = model.grid();
    let r_max = grid.radius();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = vec![phi1_values(model)?];
    for _ in 0..opts.directions {
        let center = rng.gen_range(0.0..0.5 * r_max);
        let width = rng.gen_range(0.3..1.5);
        let v = grid
            .nodes()
            .iter()
            .map(|&r| (-((r - center) / width).powi(2) / 2.0).exp() * cutoff(r, r_max))
            .collect();
        out.push(unit(model, v)?);
    }
    Ok(out)
}

/// Scans `ρ ∈ {ρ_min 10^{k/4}}` along random directions for a ring of positive
/// energy, then doubles `t` until `𝒥(tφ₁) < 0`.
///
/// The accepted `ρ` is the largest one of the leading run on which every
/// direction has positive energy and the potential stays a small share of
/// the principal part.
pub fn find_geometry(
    spec: &NonlinearitySpec,
    weight: &WeightSpec,
    grid: &Arc<RadialGrid>,
    opts: &GeometryOptions,
) -> Result<GeometryCertificate> {
    let model = EnergyModel::new(Arc::clone(grid), *spec, weight)?;
    certify(&model, opts)
}

pub(crate) fn certify(model: &EnergyModel, opts: &GeometryOptions) -> Result<GeometryCertificate> {
    if !(opts.rho_min > 0.0 && opts.rho_min.is_finite()) {
        return Err(LabError::param("rho_min", "must be positive"));
    }
    let n = model.dim() as f64;
    let dirs = directions(model, opts)?;
    let mut accepted: Option<(f64, f64)> = None;
    for k in 0..=24 {
        let rho = opts.rho_min * 10f64.powf(k as f64 / 4.0);
        let principal = 2.0 / n * rho.powf(n / 2.0);
        let ring: Vec<Option<f64>> = dirs
            .par_iter()
            .map(|d| {
                let v: Vec<f64> = d.iter().map(|x| rho * x).collect();
                let pot = model.potential(&v).ok()?;
                (pot <= opts.potential_share * principal).then(|| model.value(&v).ok()).flatten()
            })
            .collect();
        match ring.iter().copied().collect::<Option<Vec<f64>>>() {
            Some(vals) if vals.iter().all(|&j| j > 0.0) => {
                accepted = Some((rho, vals.into_iter().fold(f64::INFINITY, f64::min)));
            }
            _ => break,
        }
    }
    let Some((rho, ring_min)) = accepted else {
        return Err(LabError::GeometryNotFound(format!("no positive ring at the smallest rho = {}", opts.rho_min)));
    };

    let phi = &dirs[0];
    let at = |t: f64| model.value(&phi.iter().map(|x| t * x).collect::<Vec<_>>());
    let mut lo = rho;
    let mut t = 2.0 * rho;
    for _ in 0..64 {
        match at(t) {
            Ok(j) if j < 0.0 => {
                return Ok(GeometryCertificate {
                    rho,
                    ring_min,
                    t_neg: t,
                    j_neg: j,
                    phi1: RadialFunction::from_values(Arc::clone(model.grid()), phi.clone())?,
                });
            }
            Ok(_) => {
                lo = t;
                t *= 2.0;
            }
            // the exponent left its budget: look between the last finite point and t
            Err(LabError::Overflow(_)) => {
                if t - lo < 1e-9 * t {
                    break;
                }
                t = 0.5 * (lo + t);
            }
            Err(e) => return Err(e),
        }
    }
    Err(LabError::GeometryNotFound(format!(
        "J(t phi1) stayed nonnegative up to t = {t:.6e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional_lab::constants;
    use crate::radial_core::{build_grid, Tail};

    fn setup() -> (Arc<RadialGrid>, WeightSpec) {
        (
            Arc::new(build_grid(4, 8.0, 48, 48).unwrap()),
            WeightSpec::new(4, 0.5, Tail::constant(), 1.0).unwrap(),
        )
    }

    #[test]
    fn subcritical_certificate() {
        let (g, w) = setup();
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        let c = find_geometry(&s, &w, &g, &GeometryOptions::default()).unwrap();
        assert!(c.ring_min > 0.0 && c.j_neg < 0.0 && c.t_neg > c.rho);
        let model = EnergyModel::new(Arc::clone(&g), s, &w).unwrap();
        assert!((model.norm(c.phi1.values()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(model.value(&vec![0.0; g.len()]).unwrap(), 0.0);
    }

    #[test]
    fn huge_scale_has_no_ring() {
        let (g, w) = setup();
        let s = NonlinearitySpec::subcritical(5.0, 1e12).unwrap();
        let e = find_geometry(&s, &w, &g, &GeometryOptions::default()).unwrap_err();
        assert!(matches!(e, LabError::GeometryNotFound(_)));
    }

    #[test]
    fn critical_certificate() {
        let (g, w) = setup();
        let c = constants(4, 0.5).unwrap();
        let s = NonlinearitySpec::critical(10.0 * c.alpha_beta_general, 2.0, 0.05, c.gamma).unwrap();
        let cert = find_geometry(&s, &w, &g, &GeometryOptions::default()).unwrap();
        assert!(cert.ring_min > 0.0 && cert.j_neg < 0.0);
    }

    #[test]
    fn homogeneous_ray() {
        let (g, w) = setup();
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        let model = EnergyModel::new(Arc::clone(&g), s, &w).unwrap();
        let phi = phi1_values(&model).unwrap();
        let at = |t: f64| model.value(&phi.iter().map(|x| t * x).collect::<Vec<_>>()).unwrap();
        // slope at 0⁺ vanishes, then the ray goes to -∞
        let h = 1e-4;
        assert!(at(h) / h < 1e-3);
        let vals: Vec<f64> = (0..12).map(|k| at(2f64.powi(k))).collect();
        assert!(vals.last().unwrap() < &-1e6);
        assert!(vals.windows(2).skip(6).all(|w| w[1] < w[0]));
    }
}
