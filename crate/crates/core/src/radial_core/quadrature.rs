//! Gauss-Legendre rules and the adaptive integrators built on them.
//!
//! Radial volume integrals are taken in the logarithmic variable `t = ln r`,
//! which turns `r^{N-1} dr` into `r^N dt` and removes the logarithmic
//! singularity of the weight at the origin.

use std::sync::OnceLock;

use crate::error::{LabError, Result};

/// Nodes and weights of an `n`-point Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..(n + 1) / 2 {
            // Tricomi initial guess, refined by Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Mapped abscissae and weights on `[a, b]`.
    pub fn points(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// The panel rule used on grid intervals.
pub fn panel_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

fn adaptive_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(10))
}

const MAX_DEPTH: usize = 60;
const MAX_PANELS: usize = 200_000;

/// Adaptive bisection with a 10-point Gauss-Legendre panel rule.
///
/// A panel is accepted when its two halves agree with the whole to within
/// `rel_tol` relative to the coarse estimate of the full integral.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(LabError::Quadrature(format!("non-finite bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let rule = adaptive_rule();
    let coarse_panels = 32;
    let width = (b - a) / coarse_panels as f64;
    let mut coarse = 0.0;
    let mut coarse_abs = 0.0;
    let mut stack = Vec::with_capacity(coarse_panels);
    for k in 0..coarse_panels {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == coarse_panels { b } else { lo + width };
        let v = rule.integrate(lo, hi, &f);
        coarse += v;
        coarse_abs += v.abs();
        stack.push((lo, hi, v, 0usize));
    }
    if !coarse.is_finite() {
        return Err(LabError::Quadrature("non-finite integrand".into()));
    }
    let abs_tol = rel_tol * coarse_abs.max(f64::MIN_POSITIVE);
    let total_width = (b - a).abs();
    let mut total = 0.0;
    let mut panels = 0usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(LabError::Quadrature("panel budget exhausted".into()));
        }
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(lo, mid, &f);
        let right = rule.integrate(mid, hi, &f);
        let refined = left + right;
        if !refined.is_finite() {
            return Err(LabError::Quadrature("non-finite integrand".into()));
        }
        let share = abs_tol * ((hi - lo).abs() / total_width).max(1e-3);
        if (refined - whole).abs() <= share.max(rel_tol * refined.abs()) || depth >= MAX_DEPTH {
            total += refined;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(total)
}

/// `N V_N ∫_lo^hi r^{N-1} g(r) dr` for an analytic radial profile `g`,
/// integrated adaptively in `t = ln r` with a breakpoint at `r = 1`.
///
/// `lo = 0` is handled by truncating the `t`-range where `r^N` drops below
/// `e^{-700}` relative to the upper end.
pub fn volume_integral<G: Fn(f64) -> f64>(dim: usize, g: G, lo: f64, hi: f64) -> Result<f64> {
    if !(lo >= 0.0 && hi > lo) {
        return Err(LabError::Quadrature(format!("invalid range [{lo}, {hi}]")));
    }
    let n = dim as f64;
    let omega = crate::functional_lab::sphere_area(dim);
    let integrand = |t: f64| {
        let r = t.exp();
        (n * t).exp() * g(r)
    };
    let t_hi = hi.ln();
    let t_lo = if lo == 0.0 { t_hi - 700.0 / n } else { lo.ln() };
    let mut total = 0.0;
    if t_lo < 0.0 && t_hi > 0.0 {
        total += adaptive(&integrand, t_lo, 0.0, 1e-13)?;
        total += adaptive(&integrand, 0.0, t_hi, 1e-13)?;
    } else {
        total += adaptive(&integrand, t_lo, t_hi, 1e-13)?;
    }
    Ok(omega * total)
}
