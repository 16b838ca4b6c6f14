use crate::error::{LabError, Result};

/// Depth `-ln r_0` of the inner, log-uniform segment.
pub const DEFAULT_INNER_DEPTH: f64 = 12.0;

/// Minimum number of nodes on either segment.
pub const MIN_SEGMENT_NODES: usize = 8;

/// Graded radial grid standing in for `R^N` restricted to radial profiles.
///
/// The inner segment `(0, 1)` is uniform in `t = -ln r`; the outer segment
/// `[1, R]` is geometric, so it is uniform in `ln r` as well, with its own
/// step. There is never a node at `r = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    dim: usize,
    nodes: Vec<f64>,
    radius: f64,
    inner_count: usize,
    inner_step: f64,
    outer_step: f64,
}

/// Builds the standard grid: `inner_count` nodes `e^{-k h}`, `k = inner_count..1`,
/// followed by `outer_count` geometric nodes from `1` to `R`.
pub fn build_grid(
    dim: usize,
    radius: f64,
    inner_count: usize,
    outer_count: usize,
) -> Result<RadialGrid> {
    RadialGrid::with_inner_depth(dim, radius, inner_count, outer_count, DEFAULT_INNER_DEPTH)
}

impl RadialGrid {
    pub fn with_inner_depth(
        dim: usize,
        radius: f64,
        inner_count: usize,
        outer_count: usize,
        inner_depth: f64,
    ) -> Result<Self> {
        if dim < 4 {
            return Err(LabError::InvalidDimension(dim));
        }
        if !(radius.is_finite() && radius > 1.0) {
            return Err(LabError::param("R", format!("truncation radius must exceed 1, got {radius}")));
        }
        if inner_count < MIN_SEGMENT_NODES || outer_count < MIN_SEGMENT_NODES {
            return Err(LabError::param(
                "counts",
                format!(
                    "need at least {MIN_SEGMENT_NODES} nodes per segment, got {inner_count}/{outer_count}"
                ),
            ));
        }
        if !(inner_depth.is_finite() && inner_depth > 0.0) {
            return Err(LabError::param("inner_depth", format!("must be positive, got {inner_depth}")));
        }
        let inner_step = inner_depth / inner_count as f64;
        let outer_step = radius.ln() / (outer_count - 1) as f64;
        let mut nodes = Vec::with_capacity(inner_count + outer_count);
        for k in (1..=inner_count).rev() {
            nodes.push((-(k as f64) * inner_step).exp());
        }
        for j in 0..outer_count {
            nodes.push(if j + 1 == outer_count {
                radius
            } else if j == 0 {
                1.0
            } else {
                (j as f64 * outer_step).exp()
            });
        }
        Ok(RadialGrid {
            dim,
            nodes,
            radius,
            inner_count,
            inner_step,
            outer_step,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn inner_count(&self) -> usize {
        self.inner_count
    }

    /// Index of the node at `r = 1`.
    pub fn unit_index(&self) -> usize {
        self.inner_count
    }

    /// Step in `ln r` on the inner segment.
    pub fn inner_step(&self) -> f64 {
        self.inner_step
    }

    /// Step in `ln r` on the outer segment.
    pub fn outer_step(&self) -> f64 {
        self.outer_step
    }

    /// Smallest node.
    pub fn r0(&self) -> f64 {
        self.nodes[0]
    }

    /// Interval `[nodes[i], nodes[i+1]]` containing `r`, clamped to the grid.
    pub fn interval_of(&self, r: f64) -> usize {
        let last = self.nodes.len() - 2;
        match self.nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(last),
            Err(0) => 0,
            Err(i) => (i - 1).min(last),
        }
    }

    /// Same node count and nodes, twice as many intervals per segment.
    pub fn refined(&self) -> Result<Self> {
        let outer = self.nodes.len() - self.inner_count;
        RadialGrid::with_inner_depth(
            self.dim,
            self.radius,
            2 * self.inner_count,
            2 * outer - 1,
            self.inner_step * self.inner_count as f64,
        )
    }

    /// Trapezoid weights in `ln r` for `N V_N ∫ r^{N-1} g dr ≈ Σ q_i g(r_i)`.
    ///
    /// The first weight also carries the ball `|x| < r_0` with `g` frozen at `r_0`.
    pub fn nodal_weights(&self) -> Vec<f64> {
        let n = self.dim as f64;
        let omega = crate::functional_lab::sphere_area(self.dim);
        let m = self.nodes.len();
        let mut q = vec![0.0; m];
        for i in 0..m - 1 {
            let dt = (self.nodes[i + 1] / self.nodes[i]).ln();
            q[i] += 0.5 * dt * self.nodes[i].powf(n);
            q[i + 1] += 0.5 * dt * self.nodes[i + 1].powf(n);
        }
        q[0] += self.nodes[0].powf(n) / n;
        q.iter_mut().for_each(|v| *v *= omega);
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_grid_shape() {
        let g = build_grid(4, 10.0, 64, 64).unwrap();
        assert_eq!(g.len(), 128);
        assert_eq!(*g.nodes().last().unwrap(), 10.0);
        assert_eq!(g.nodes()[g.unit_index()], 1.0);
        assert!((g.r0() - (-12.0f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn minimum_grid_is_monotone() {
        let g = build_grid(4, 2.0, 8, 8).unwrap();
        assert_eq!(g.len(), 16);
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build_grid(3, 10.0, 64, 64), Err(LabError::InvalidDimension(3)));
        assert!(build_grid(4, 1.0, 64, 64).is_err());
        assert!(build_grid(4, 10.0, 7, 64).is_err());
    }

    #[test]
    fn interval_lookup() {
        let g = build_grid(4, 10.0, 16, 16).unwrap();
        assert_eq!(g.interval_of(0.0), 0);
        assert_eq!(g.interval_of(100.0), g.len() - 2);
        let i = g.interval_of(1.5);
        assert!(g.nodes()[i] <= 1.5 && 1.5 <= g.nodes()[i + 1]);
    }

    #[test]
    fn nodal_weights_integrate_constants() {
        let g = build_grid(4, 2.0, 400, 400).unwrap();
        let total: f64 = g.nodal_weights().iter().sum();
        let exact = std::f64::consts::PI.powi(2) / 2.0 * 16.0;
        assert!((total - exact).abs() / exact < 1e-4);
    }
}
