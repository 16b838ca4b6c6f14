//! Composite Gauss quadrature of radial volume integrals on a grid.

use super::function::RadialFunction;
use super::grid::RadialGrid;
use super::quadrature::panel_rule;
use crate::error::{LabError, Result};

/// One quadrature point: radius, volume weight `N V_N r^N dt`, grid interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialNode {
    pub r: f64,
    pub weight: f64,
    pub interval: usize,
}

/// Panels in `t = ln r` below the first node, widening geometrically.
const CORE_PANELS: usize = 8;

fn push_panel(out: &mut Vec<RadialNode>, t0: f64, t1: f64, n: f64, omega: f64, interval: usize) {
    for (t, w) in panel_rule().points(t0, t1) {
        out.push(RadialNode {
            r: t.exp(),
            weight: omega * w * (n * t).exp(),
            interval,
        });
    }
}

/// Quadrature nodes for `N V_N ∫_lo^hi r^{N-1} g(r) dr`, one Gauss panel per
/// grid interval intersected with `[lo, hi]`.
///
/// With `core = true`, the ball below the first grid node is covered by
/// panels in `ln r`; otherwise it is left out and the caller handles it.
pub fn radial_rule(grid: &RadialGrid, lo: f64, hi: f64, core: bool) -> Result<Vec<RadialNode>> {
    check_bounds(grid, lo, hi)?;
    let hi = hi.min(grid.radius());
    let n = grid.dim() as f64;
    let omega = crate::functional_lab::sphere_area(grid.dim());
    let x = grid.nodes();
    let mut out = Vec::new();
    let r0 = x[0];
    if core && lo < r0 {
        let top = hi.min(r0).ln();
        let mut width = 1.0;
        let mut upper = top;
        let floor = if lo > 0.0 { lo.ln() } else { f64::NEG_INFINITY };
        for _ in 0..CORE_PANELS {
            let lower = (upper - width).max(floor);
            push_panel(&mut out, lower, upper, n, omega, 0);
            if lower <= floor {
                break;
            }
            upper = lower;
            width *= 2.0;
        }
    }
    let first = grid.interval_of(lo.max(r0));
    for i in first..x.len() - 1 {
        let a = x[i].max(lo);
        let b = x[i + 1].min(hi);
        if b <= a {
            if x[i] >= hi {
                break;
            }
            continue;
        }
        push_panel(&mut out, a.ln(), b.ln(), n, omega, i);
    }
    Ok(out)
}

fn check_bounds(grid: &RadialGrid, lo: f64, hi: f64) -> Result<()> {
    let r = grid.radius();
    if !(lo >= 0.0 && hi > lo && hi <= r * (1.0 + 1e-12)) {
        return Err(LabError::param(
            "bounds",
            format!("need 0 <= lo < hi <= R = {r}, got [{lo}, {hi}]"),
        ));
    }
    Ok(())
}

/// `N V_N ∫_lo^hi r^{N-1} f(r) dr`.
///
/// Analytic functions are evaluated exactly at the Gauss points, including
/// the ball below the first node; sampled functions use their log-cubic
/// interpolant and are frozen at the first node inside that ball.
pub fn quad_radial(f: &RadialFunction, lo: f64, hi: f64) -> Result<f64> {
    quad_radial_with(f, lo, hi, |_, v| v)
}

/// `N V_N ∫_lo^hi r^{N-1} h(r, f(r)) dr`.
pub fn quad_radial_with<H: Fn(f64, f64) -> f64>(
    f: &RadialFunction,
    lo: f64,
    hi: f64,
    h: H,
) -> Result<f64> {
    let grid = f.grid();
    let analytic = f.is_analytic();
    let rule = radial_rule(grid, lo, hi, analytic)?;
    let mut total = 0.0;
    for node in &rule {
        let v = h(node.r, f.eval_in(node.interval, node.r));
        if !v.is_finite() {
            return Err(LabError::NonFinite { radius: node.r });
        }
        total += node.weight * v;
    }
    let r0 = grid.r0();
    if !analytic && lo < r0 {
        let top = hi.min(r0);
        let n = grid.dim() as f64;
        let v = h(r0, f.values()[0]);
        if !v.is_finite() {
            return Err(LabError::NonFinite { radius: r0 });
        }
        let omega = crate::functional_lab::sphere_area(grid.dim());
        total += omega * v * (top.powf(n) - lo.powf(n)) / n;
    }
    Ok(total)
}
