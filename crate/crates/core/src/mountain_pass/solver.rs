use std::sync::Arc;

use nalgebra::DVector;
use rayon::prelude::*;

use super::energy::{hat_residual, EnergyModel};
use super::geometry::{certify, GeometryCertificate, GeometryOptions};
use super::nonlinearity::NonlinearitySpec;
use crate::error::{LabError, Result};
use crate::functional_lab::{constants, Convention, SobolevConstants};
use crate::radial_core::{RadialFunction, RadialGrid, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub knots: usize,
    /// Stop once the residual drops below this.
    pub tol: f64,
    /// Relative Riesz-gradient size `‖𝒥'(u)‖_* / ‖u‖` at which path descent
    /// hands over to Newton polishing.
    pub switch_tol: f64,
    pub max_rounds: usize,
    pub max_newton: usize,
    pub convention: Convention,
    pub geometry: GeometryOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            knots: 32,
            tol: 1e-8,
            switch_tol: 1e-2,
            max_rounds: 2_000,
            max_newton: 40,
            convention: Convention::General,
            geometry: GeometryOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub u_star: RadialFunction,
    pub level: f64,
    /// Dual-norm estimate of `𝒥'(u*)` over the free hats and `u*`.
    pub residual: f64,
    pub iterations: usize,
    pub descent_rounds: usize,
    pub newton_steps: usize,
    pub converged: bool,
    pub ps_bound: f64,
    pub below_bound: bool,
    /// Discrete `‖u*‖`.
    pub norm: f64,
    /// `|‖u*‖^{N/2} - Σ q f(u*)u*| / ‖u*‖^{N/2}`.
    pub ar_gap: f64,
    pub certificate: GeometryCertificate,
    /// Path maximum before and after every accepted descent step.
    pub descent_log: Vec<(f64, f64)>,
}

/// `(2/N)(α_β/α₀)^{N/(2γ)}` for the exponential kind, `+∞` for powers.
pub fn ps_bound(spec: &NonlinearitySpec, consts: &SobolevConstants, convention: Convention) -> Result<f64> {
    match spec.alpha0() {
        None => Ok(f64::INFINITY),
        Some(alpha0) => {
            let n = consts.dim as f64;
            Ok(2.0 / n * (consts.alpha_beta(convention)? / alpha0).powf(n / (2.0 * consts.gamma)))
        }
    }
}

/// Overflowing potentials send `𝒥` to `-∞`.
fn finite_or_low(v: Result<f64>) -> Result<f64> {
    match v {
        Err(LabError::Overflow(_)) => Ok(f64::NEG_INFINITY),
        other => other,
    }
}

struct Path<'a> {
    model: &'a EnergyModel,
    metric: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    knots: Vec<Vec<f64>>,
    energies: Vec<f64>,
}

impl Path<'_> {
    fn free_vec(&self, v: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(&v[..self.model.free()])
    }

    fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        let d = self.free_vec(a) - self.free_vec(b);
        // Gram form of the metric without the factorization
        let l = self.metric.l();
        (l.transpose() * d).norm()
    }

    fn refresh(&mut self) -> Result<()> {
        let model = self.model;
        self.energies = self.knots.par_iter().map(|k| finite_or_low(model.value(k))).collect::<Result<Vec<_>>>()?;
        Ok(())
    }

    /// Moves the top knot to the maximum of `𝒥` on its two adjacent segments.
    fn refine_peak(&mut self, top: usize) -> Result<()> {
        let k = self.knots.len();
        if top == 0 || top + 1 == k {
            return Ok(());
        }
        let (prev, here, next) = (&self.knots[top - 1], &self.knots[top], &self.knots[top + 1]);
        let at = |s: f64| -> Vec<f64> {
            let other = if s < 0.0 { prev } else { next };
            here.iter().zip(other).map(|(h, o)| h + s.abs() * (o - h)).collect()
        };
        let model = self.model;
        let energy = |s: f64| finite_or_low(model.value(&at(s)));
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (-1.0, 1.0);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (energy(c)?, energy(d)?);
        for _ in 0..60 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = energy(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = energy(d)?;
            }
        }
        let (s, j) = if fc >= fd { (c, fc) } else { (d, fd) };
        if j > self.energies[top] {
            self.knots[top] = at(s);
            self.energies[top] = j;
        }
        Ok(())
    }

    fn peak(&self) -> usize {
        let mut best = 0;
        for (i, &e) in self.energies.iter().enumerate() {
            if e > self.energies[best] {
                best = i;
            }
        }
        best
    }

    /// One backtracked Riesz-gradient step of knot `i`, with the component
    /// along the path removed so the knot leaves the path instead of sliding
    /// along it. `None` when no step decreases `𝒥`.
    fn relax(&self, i: usize) -> Result<Option<(Vec<f64>, f64)>> {
        let j0 = self.energies[i];
        // knots already below 0 stay put; descending them runs off to -∞
        if !(j0.is_finite() && j0 > 0.0) {
            return Ok(None);
        }
        let u = &self.knots[i];
        let gf = self.free_vec(&self.model.gradient(u)?);
        let mut d = self.metric.solve(&gf);
        let tau = self.free_vec(&self.knots[i + 1]) - self.free_vec(&self.knots[i - 1]);
        let tt = (self.metric.l().transpose() * &tau).norm_squared();
        if tt > 0.0 {
            d -= &tau * (tau.dot(&gf) / tt);
        }
        let slope = gf.dot(&d);
        if !(slope > 0.0) {
            return Ok(None);
        }
        // never move further than half the local knot spacing
        let reach = 0.5 * self.dist(&self.knots[i + 1], u).min(self.dist(u, &self.knots[i - 1]));
        let mut step = (reach / (self.metric.l().transpose() * &d).norm()).min(1.0);
        for _ in 0..60 {
            let trial: Vec<f64> = u
                .iter()
                .enumerate()
                .map(|(n, x)| if n < d.len() { x - step * d[n] } else { *x })
                .collect();
            match self.model.value(&trial) {
                Ok(j) if j <= j0 - 1e-4 * step * slope && j < j0 => return Ok(Some((trial, j))),
                Ok(_) | Err(LabError::Overflow(_)) => step *= 0.5,
                Err(e) => return Err(e),
            }
        }
        Ok(None)
    }

    /// Equal spacing in the metric, endpoints kept. Runs only once the
    /// segment lengths spread past `spread`; re-spacing after every step
    /// pulls the moved knot back onto the chord.
    fn reparametrize(&mut self, spread: f64) -> Result<()> {
        let k = self.knots.len();
        let mut s = vec![0.0; k];
        let (mut shortest, mut longest) = (f64::INFINITY, 0.0_f64);
        for i in 1..k {
            let d = self.dist(&self.knots[i], &self.knots[i - 1]);
            shortest = shortest.min(d);
            longest = longest.max(d);
            s[i] = s[i - 1] + d;
        }
        if longest <= spread * shortest {
            return Ok(());
        }
        let total = s[k - 1];
        if !(total > 0.0) {
            return Err(LabError::Solver("path collapsed".into()));
        }
        let mut out = Vec::with_capacity(k);
        out.push(self.knots[0].clone());
        let mut seg = 0;
        for j in 1..k - 1 {
            let target = total * j as f64 / (k - 1) as f64;
            while s[seg + 1] < target {
                seg += 1;
            }
            let span = s[seg + 1] - s[seg];
            let a = if span > 0.0 { (target - s[seg]) / span } else { 0.0 };
            out.push(
                self.knots[seg]
                    .iter()
                    .zip(&self.knots[seg + 1])
                    .map(|(x, y)| (1.0 - a) * x + a * y)
                    .collect(),
            );
        }
        out.push(self.knots[k - 1].clone());
        self.knots = out;
        self.refresh()
    }
}

/// Numerical min-max on a path from `0` to `t_neg φ₁`.
///
/// Each round moves the highest knot to the top of its two segments, steps
/// every interior knot down the Riesz gradient across the path with its own
/// backtracking search, and re-spaces the knots. Once the gradient at the top
/// is small, Newton steps on the free nodes finish the job.
pub fn mountain_pass_solve(
    spec: &NonlinearitySpec,
    weight: &WeightSpec,
    grid: &Arc<RadialGrid>,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    if opts.knots < 3 {
        return Err(LabError::param("knots", "need at least 3 path knots"));
    }
    if !(opts.tol > 0.0 && opts.switch_tol > 0.0) {
        return Err(LabError::param("tol", "tolerances must be positive"));
    }
    let consts = constants(weight.dim(), weight.beta())?;
    let model = EnergyModel::new(Arc::clone(grid), *spec, weight)?;
    let cert = certify(&model, &opts.geometry)?;
    let metric = model
        .metric()
        .cholesky()
        .ok_or_else(|| LabError::Solver("metric is not positive definite".into()))?;

    let k = opts.knots;
    let end: Vec<f64> = cert.phi1.values().iter().map(|x| cert.t_neg * x).collect();
    let mut path = Path {
        model: &model,
        metric,
        knots: (0..k).map(|i| end.iter().map(|x| x * i as f64 / (k - 1) as f64).collect()).collect(),
        energies: Vec::new(),
    };
    path.refresh()?;

    let mut descent_log = Vec::new();
    let mut rounds = 0;
    let mut u: Vec<f64>;
    loop {
        let top = path.peak();
        path.refine_peak(top)?;
        u = path.knots[top].clone();
        let gf = path.free_vec(&model.gradient(&u)?);
        let full = gf.dot(&path.metric.solve(&gf)).sqrt();
        if full < opts.switch_tol * path.dist(&u, &vec![0.0; u.len()]) || rounds >= opts.max_rounds {
            break;
        }
        let before = path.energies[top];
        let moves = (1..k - 1)
            .into_par_iter()
            .map(|i| path.relax(i))
            .collect::<Result<Vec<_>>>()?;
        if top == 0 || top == k - 1 {
            return Err(LabError::Solver(format!("path lost its interior maximum at round {rounds}")));
        }
        if moves[top - 1].is_none() {
            return Err(LabError::Solver(format!("line search failed at round {rounds}")));
        }
        for (i, m) in moves.into_iter().enumerate() {
            if let Some((knot, j)) = m {
                path.knots[i + 1] = knot;
                path.energies[i + 1] = j;
            }
        }
        descent_log.push((before, path.energies[path.peak()]));
        path.reparametrize(1.0)?;
        rounds += 1;
    }

    let mut newton = 0;
    let mut g = model.gradient(&u)?;
    let mut res = hat_residual(&model, &u, &g)?;
    while res >= opts.tol && newton < opts.max_newton {
        let h = model.hessian(&u)?;
        let rhs = -path.free_vec(&g);
        let delta = h
            .lu()
            .solve(&rhs)
            .ok_or_else(|| LabError::Solver("singular Hessian".into()))?;
        let mut step = 1.0;
        let mut moved = false;
        for _ in 0..30 {
            let mut trial = u.clone();
            for (t, di) in trial.iter_mut().zip(delta.iter()) {
                *t += step * di;
            }
            if let Ok(gt) = model.gradient(&trial) {
                let rt = hat_residual(&model, &trial, &gt)?;
                if rt < res {
                    u = trial;
                    g = gt;
                    res = rt;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        newton += 1;
        if !moved {
            break;
        }
    }

    let u_star = RadialFunction::from_values(Arc::clone(grid), u)?;
    let v = u_star.values();
    let nb = model.breakdown(v)?;
    let level = model.value(v)?;
    let pairing: f64 = v
        .iter()
        .zip(grid.nodal_weights())
        .map(|(&x, q)| Ok(q * spec.f(x)? * x))
        .sum::<Result<f64>>()?;
    let bound = ps_bound(spec, &consts, opts.convention)?;
    Ok(SolveResult {
        level,
        residual: res,
        iterations: rounds + newton,
        descent_rounds: rounds,
        newton_steps: newton,
        converged: res < opts.tol,
        ps_bound: bound,
        below_bound: level < bound,
        norm: nb.norm,
        ar_gap: (nb.total - pairing).abs() / nb.total,
        certificate: cert,
        descent_log,
        u_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mountain_pass::energy::solution_residual;
    use crate::radial_core::{build_grid, Tail};
    use approx::assert_relative_eq;

    #[test]
    fn subcritical_solution() {
        let g = Arc::new(build_grid(4, 8.0, 64, 64).unwrap());
        let w = WeightSpec::new(4, 0.5, Tail::constant(), 1.0).unwrap();
        let s = NonlinearitySpec::subcritical(5.0, 1.0).unwrap();
        let r = mountain_pass_solve(&s, &w, &g, &SolveOptions::default()).unwrap();
        assert!(r.converged, "residual {}", r.residual);
        assert!(r.level >= r.certificate.ring_min && r.level > 0.0);
        assert!(r.norm >= r.certificate.rho);
        assert!(r.ar_gap < 1e-6);
        assert!(r.ps_bound.is_infinite() && r.below_bound);
        assert!(r.descent_log.iter().all(|(a, b)| b <= a) || r.descent_log.is_empty());
        assert_relative_eq!(r.residual, solution_residual(&r.u_star, &s, &w).unwrap(), max_relative = 1e-9);
    }

    #[test]
    fn bound_arithmetic() {
        let c = constants(4, 0.5).unwrap();
        let s = NonlinearitySpec::critical(10.0 * c.alpha_beta_general, 2.0, 1.0, c.gamma).unwrap();
        let b = ps_bound(&s, &c, Convention::General).unwrap();
        assert_relative_eq!(b, 0.5 * 0.1f64.sqrt(), max_relative = 1e-12);
    }
}
