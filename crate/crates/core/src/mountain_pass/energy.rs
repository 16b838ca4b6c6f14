use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use super::nonlinearity::NonlinearitySpec;
use crate::error::{LabError, Result};
use crate::functional_lab::NormBreakdown;
use crate::radial_core::{gradient_matrix, laplacian_matrix, DiffMatrix, RadialFunction, RadialGrid, WeightSpec};

/// Regularization of `|s|^{N/2-2}` for `N > 4`.
pub const EPS_REG: f64 = 1e-12;

/// Nodes at the outer end held at zero (`u = u' = 0` at `R`).
pub const CLAMPED: usize = 2;

/// Discrete energy `𝒥` on a fixed grid.
///
/// Every integral is the nodal rule `Σ q_i g(r_i)` and derivatives come from
/// the three-point matrices, so the gradient and Hessian below are exact for
/// this discretization.
#[derive(Debug, Clone)]
pub struct EnergyModel {
    grid: Arc<RadialGrid>,
    spec: NonlinearitySpec,
    q: Vec<f64>,
    qw: Vec<f64>,
    lap: DiffMatrix,
    der: DiffMatrix,
}

#[derive(Debug, Clone)]
pub struct EnergyState {
    pub u: RadialFunction,
    pub j_value: f64,
    /// `∂𝒥/∂u_i` at every node, clamped ones included.
    pub grad: Vec<f64>,
    /// Nodal-rule terms; `j_value = (2/N) total - Σ q F(u)`.
    pub norm_part: NormBreakdown,
}

impl EnergyModel {
    pub fn new(grid: Arc<RadialGrid>, spec: NonlinearitySpec, weight: &WeightSpec) -> Result<Self> {
        if weight.dim() != grid.dim() {
            return Err(LabError::param(
                "weight",
                format!("weight is for N = {}, grid for N = {}", weight.dim(), grid.dim()),
            ));
        }
        let q = grid.nodal_weights();
        let qw = q.iter().zip(grid.nodes()).map(|(q, &r)| q * weight.value(r)).collect();
        Ok(EnergyModel {
            lap: laplacian_matrix(&grid)?,
            der: gradient_matrix(&grid)?,
            grid,
            spec,
            q,
            qw,
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn spec(&self) -> &NonlinearitySpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Number of unconstrained nodes.
    pub fn free(&self) -> usize {
        self.q.len() - CLAMPED
    }

    /// `φ(s)` with `(2/N) Σ φ = ` the principal part; `|s|^{N/2}` up to regularization.
    fn phi(&self, s: f64) -> f64 {
        match self.dim() {
            4 => s * s,
            n => {
                let e = n as f64 / 4.0;
                (s * s + EPS_REG).powf(e) - EPS_REG.powf(e)
            }
        }
    }

    /// `(2/N) φ'(s) = s (s² + ε)^{N/4-1}`.
    fn psi(&self, s: f64) -> f64 {
        match self.dim() {
            4 => s,
            n => s * (s * s + EPS_REG).powf(n as f64 / 4.0 - 1.0),
        }
    }

    fn psi_prime(&self, s: f64) -> f64 {
        match self.dim() {
            4 => 1.0,
            n => {
                let e = n as f64 / 4.0 - 1.0;
                let b = s * s + EPS_REG;
                b.powf(e) + 2.0 * e * s * s * b.powf(e - 1.0)
            }
        }
    }

    fn check_len(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.len() {
            return Err(LabError::param(
                "u",
                format!("expected {} nodal values, got {}", self.len(), u.len()),
            ));
        }
        Ok(())
    }

    /// Nodal-rule norm terms of `u`.
    pub fn breakdown(&self, u: &[f64]) -> Result<NormBreakdown> {
        self.check_len(u)?;
        let lu = self.lap.apply(u);
        let du = self.der.apply(u);
        let mut t = [0.0; 3];
        for i in 0..u.len() {
            t[0] += self.qw[i] * self.phi(lu[i]);
            t[1] += self.q[i] * self.phi(du[i]);
            t[2] += self.q[i] * self.phi(u[i]);
        }
        Ok(NormBreakdown::from_terms(self.dim(), t[0], t[1], t[2]))
    }

    /// Discrete `‖u‖`.
    pub fn norm(&self, u: &[f64]) -> Result<f64> {
        Ok(self.breakdown(u)?.norm)
    }

    /// `Σ q F(u)`.
    pub fn potential(&self, u: &[f64]) -> Result<f64> {
        self.check_len(u)?;
        u.iter().zip(&self.q).map(|(&v, q)| Ok(q * self.spec.big_f(v)?)).sum()
    }

    pub fn value(&self, u: &[f64]) -> Result<f64> {
        let nb = self.breakdown(u)?;
        Ok(2.0 / self.dim() as f64 * nb.total - self.potential(u)?)
    }

    /// Exact gradient of [`EnergyModel::value`] with respect to the nodal values.
    pub fn gradient(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_len(u)?;
        let lu = self.lap.apply(u);
        let du = self.der.apply(u);
        let a: Vec<f64> = lu.iter().zip(&self.qw).map(|(&s, qw)| qw * self.psi(s)).collect();
        let b: Vec<f64> = du.iter().zip(&self.q).map(|(&s, q)| q * self.psi(s)).collect();
        let mut g = self.lap.apply_transpose(&a);
        for (gi, bi) in g.iter_mut().zip(self.der.apply_transpose(&b)) {
            *gi += bi;
        }
        for i in 0..u.len() {
            g[i] += self.q[i] * (self.psi(u[i]) - self.spec.f(u[i])?);
        }
        Ok(g)
    }

    fn quadratic_form(&self, a: &[f64], b: &[f64], c: &[f64]) -> DMatrix<f64> {
        let k = self.free();
        let l = self.lap.to_dense().columns(0, k).into_owned();
        let d = self.der.to_dense().columns(0, k).into_owned();
        let mut h = l.transpose() * DMatrix::from_diagonal(&DVector::from_column_slice(a)) * &l;
        h += d.transpose() * DMatrix::from_diagonal(&DVector::from_column_slice(b)) * &d;
        for i in 0..k {
            h[(i, i)] += c[i];
        }
        h
    }

    /// Hessian on the free nodes.
    pub fn hessian(&self, u: &[f64]) -> Result<DMatrix<f64>> {
        self.check_len(u)?;
        let lu = self.lap.apply(u);
        let du = self.der.apply(u);
        let a: Vec<f64> = lu.iter().zip(&self.qw).map(|(&s, qw)| qw * self.psi_prime(s)).collect();
        let b: Vec<f64> = du.iter().zip(&self.q).map(|(&s, q)| q * self.psi_prime(s)).collect();
        let c = (0..self.free())
            .map(|i| Ok(self.q[i] * (self.psi_prime(u[i]) - self.spec.f_prime(u[i])?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.quadratic_form(&a, &b, &c))
    }

    /// Gram matrix of the `N = 4` inner product on the free nodes, used as
    /// the Riesz map.
    pub fn metric(&self) -> DMatrix<f64> {
        self.quadratic_form(&self.qw, &self.q, &self.q[..self.free()])
    }

    pub fn state(&self, u: &RadialFunction) -> Result<EnergyState> {
        if u.grid().as_ref() != self.grid.as_ref() {
            return Err(LabError::param("u", "function lives on a different grid"));
        }
        let v = u.values();
        let norm_part = self.breakdown(v)?;
        let j_value = 2.0 / self.dim() as f64 * norm_part.total - self.potential(v)?;
        Ok(EnergyState {
            u: u.clone(),
            j_value,
            grad: self.gradient(v)?,
            norm_part,
        })
    }
}

/// `𝒥(u)` with its nodal gradient.
pub fn energy(u: &RadialFunction, spec: &NonlinearitySpec, weight: &WeightSpec) -> Result<EnergyState> {
    EnergyModel::new(Arc::clone(u.grid()), *spec, weight)?.state(u)
}

/// Unit hats at the free nodes.
pub fn nodal_hats(grid: &Arc<RadialGrid>) -> Vec<RadialFunction> {
    let m = grid.len();
    (0..m - CLAMPED)
        .map(|k| {
            let mut v = vec![0.0; m];
            v[k] = 1.0;
            RadialFunction::from_values(Arc::clone(grid), v).expect("finite hat")
        })
        .collect()
}

/// `max_φ |𝒥'(u)φ| / ‖φ‖` over `test_profiles`.
pub fn weak_residual(
    u: &RadialFunction,
    spec: &NonlinearitySpec,
    weight: &WeightSpec,
    test_profiles: &[RadialFunction],
) -> Result<f64> {
    let model = EnergyModel::new(Arc::clone(u.grid()), *spec, weight)?;
    let g = model.gradient(u.values())?;
    residual_with(&model, &g, test_profiles.iter().map(|p| p.values()), u.grid(), test_profiles)
}

fn residual_with<'a>(
    model: &EnergyModel,
    g: &[f64],
    tests: impl Iterator<Item = &'a [f64]>,
    grid: &Arc<RadialGrid>,
    profiles: &[RadialFunction],
) -> Result<f64> {
    if profiles.iter().any(|p| p.grid().as_ref() != grid.as_ref()) {
        return Err(LabError::param("test_profiles", "profile lives on a different grid"));
    }
    let mut worst: f64 = 0.0;
    for phi in tests {
        let n = model.norm(phi)?;
        if !(n > 0.0) {
            return Err(LabError::ZeroNorm("test profile"));
        }
        let pairing: f64 = g.iter().zip(phi).map(|(a, b)| a * b).sum();
        worst = worst.max(pairing.abs() / n);
    }
    Ok(worst)
}

/// Residual over the free hats and `u` itself, assembled from nodal values.
pub(crate) fn hat_residual(model: &EnergyModel, u: &[f64], g: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    let lap = &model.lap;
    let der = &model.der;
    let dim = model.dim();
    for k in 0..model.free() {
        // norm of a hat from its three-point columns
        let mut t = [0.0; 3];
        for i in k.saturating_sub(2)..(k + 3).min(model.len()) {
            let (s, c) = lap.row(i);
            if (s..s + 3).contains(&k) {
                t[0] += model.qw[i] * model.phi(c[k - s]);
            }
            let (s, c) = der.row(i);
            if (s..s + 3).contains(&k) {
                t[1] += model.q[i] * model.phi(c[k - s]);
            }
        }
        t[2] = model.q[k] * model.phi(1.0);
        let n = NormBreakdown::from_terms(dim, t[0], t[1], t[2]).norm;
        worst = worst.max(g[k].abs() / n);
    }
    let nu = model.norm(u)?;
    if nu > 0.0 {
        let pairing: f64 = g.iter().zip(u).map(|(a, b)| a * b).sum();
        worst = worst.max(pairing.abs() / nu);
    }
    Ok(worst)
}

/// Residual over the free hats and `u`, the dual-norm estimate reported by the solver.
pub fn solution_residual(u: &RadialFunction, spec: &NonlinearitySpec, weight: &WeightSpec) -> Result<f64> {
    let model = EnergyModel::new(Arc::clone(u.grid()), *spec, weight)?;
    let g = model.gradient(u.values())?;
    hat_residual(&model, u.values(), &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_core::{build_grid, Tail};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(dim: usize) -> (Arc<RadialGrid>, WeightSpec) {
        let beta = if dim == 4 { 0.5 } else { 0.7 };
        let g = Arc::new(build_grid(dim, 8.0, 48, 48).unwrap());
        (g, WeightSpec::new(dim, beta, Tail::constant(), 1.0).unwrap())
    }

    fn bump(g: &Arc<RadialGrid>, amp: f64) -> RadialFunction {
        let r_max = g.radius();
        let mut v: Vec<f64> = g.nodes().iter().map(|r| amp * (-r * r / 2.0).exp() * (1.0 - (r / r_max).powi(2)).powi(2)).collect();
        let m = v.len();
        v[m - 2..].iter_mut().for_each(|x| *x = 0.0);
        RadialFunction::from_values(Arc::clone(g), v).unwrap()
    }

    #[test]
    fn zero_state() {
        let (g, w) = setup(4);
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        let st = energy(&RadialFunction::zeros(Arc::clone(&g)), &s, &w).unwrap();
        assert_eq!(st.j_value, 0.0);
        assert!(st.grad.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn state_is_consistent() {
        let (g, w) = setup(4);
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        let u = bump(&g, 1.3);
        let st = energy(&u, &s, &w).unwrap();
        let model = EnergyModel::new(Arc::clone(&g), s, &w).unwrap();
        let direct = 0.5 * st.norm_part.total - model.potential(u.values()).unwrap();
        assert!((st.j_value - direct).abs() <= 1e-12 * direct.abs().max(1.0));
    }

    #[test]
    fn scaling_along_a_ray() {
        let (g, w) = setup(4);
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        let u = bump(&g, 1.0);
        let model = EnergyModel::new(Arc::clone(&g), s, &w).unwrap();
        let nb = model.breakdown(u.values()).unwrap();
        let p5: f64 = u.values().iter().zip(&model.q).map(|(v, q)| q * v.abs().powi(5)).sum();
        for t in [0.5, 1.0, 2.0] {
            let j = energy(&u.scale(t), &s, &w).unwrap().j_value;
            let expected = 0.5 * t * t * nb.total - t.powi(5) / 5.0 * p5;
            assert_relative_eq!(j, expected, max_relative = 1e-12);
        }
    }

    fn fd_check(dim: usize, spec: NonlinearitySpec, amp: f64) {
        let (g, w) = setup(dim);
        let model = EnergyModel::new(Arc::clone(&g), spec, &w).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = bump(&g, amp);
        let grad = model.gradient(u.values()).unwrap();
        for _ in 0..5 {
            let h: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0) * 0.1).collect();
            let eps = 1e-5;
            let plus: Vec<f64> = u.values().iter().zip(&h).map(|(a, b)| a + eps * b).collect();
            let minus: Vec<f64> = u.values().iter().zip(&h).map(|(a, b)| a - eps * b).collect();
            let fd = (model.value(&plus).unwrap() - model.value(&minus).unwrap()) / (2.0 * eps);
            let an: f64 = grad.iter().zip(&h).map(|(a, b)| a * b).sum();
            assert!((fd - an).abs() <= 1e-5 * an.abs(), "fd {fd} vs {an}");
        }
    }

    #[test]
    fn gradient_matches_differences() {
        fd_check(4, NonlinearitySpec::subcritical(5.0, 1.0).unwrap(), 1.5);
        fd_check(6, NonlinearitySpec::subcritical(7.0, 1.0).unwrap(), 1.5);
    }

    #[test]
    fn hessian_matches_gradient_differences() {
        let (g, w) = setup(4);
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        let model = EnergyModel::new(Arc::clone(&g), s, &w).unwrap();
        let u = bump(&g, 1.2);
        let h = model.hessian(u.values()).unwrap();
        let k = 10;
        let eps = 1e-6;
        let mut up = u.values().to_vec();
        up[k] += eps;
        let mut dn = u.values().to_vec();
        dn[k] -= eps;
        let gp = model.gradient(&up).unwrap();
        let gd = model.gradient(&dn).unwrap();
        for i in 0..model.free() {
            let fd = (gp[i] - gd[i]) / (2.0 * eps);
            assert!((fd - h[(i, k)]).abs() <= 1e-6 * h[(k, k)].abs(), "{i}: {fd} vs {}", h[(i, k)]);
        }
    }

    #[test]
    fn residuals() {
        let (g, w) = setup(4);
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        let z = RadialFunction::zeros(Arc::clone(&g));
        let hats = nodal_hats(&g);
        assert_eq!(weak_residual(&z, &s, &w, &hats).unwrap(), 0.0);
        let u = bump(&g, 1.0);
        let mut tests = hats.clone();
        tests.push(u.clone());
        let r = weak_residual(&u, &s, &w, &tests).unwrap();
        assert!(r > 0.0);
        assert_relative_eq!(r, solution_residual(&u, &s, &w).unwrap(), max_relative = 1e-12);
        assert!(weak_residual(&u, &s, &w, &[z]).is_err());
    }
}
