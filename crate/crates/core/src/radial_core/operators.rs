//! Finite-difference radial derivatives on nonuniform nodes.

use std::sync::Arc;

use super::function::{Evaluator, RadialFunction};
use super::grid::RadialGrid;
use crate::error::{LabError, Result};

/// Banded matrix with three consecutive nonzeros per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffMatrix {
    rows: Vec<(usize, [f64; 3])>,
}

impl DiffMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> (usize, [f64; 3]) {
        self.rows[i]
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|(s, c)| c[0] * u[*s] + c[1] * u[s + 1] + c[2] * u[s + 2])
            .collect()
    }

    /// `Mᵀ v`.
    pub fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows.len()];
        for (i, (s, c)) in self.rows.iter().enumerate() {
            for k in 0..3 {
                out[s + k] += c[k] * v[i];
            }
        }
        out
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let m = self.rows.len();
        let mut d = nalgebra::DMatrix::zeros(m, m);
        for (i, (s, c)) in self.rows.iter().enumerate() {
            for k in 0..3 {
                d[(i, s + k)] = c[k];
            }
        }
        d
    }
}

/// Weights of the first and second derivative at `x` of the quadratic through `xs`.
fn lagrange3(xs: [f64; 3], x: f64) -> ([f64; 3], [f64; 3]) {
    let mut d1 = [0.0; 3];
    let mut d2 = [0.0; 3];
    for k in 0..3 {
        let (a, b) = match k {
            0 => (xs[1], xs[2]),
            1 => (xs[0], xs[2]),
            _ => (xs[0], xs[1]),
        };
        let den = (xs[k] - a) * (xs[k] - b);
        d1[k] = ((x - a) + (x - b)) / den;
        d2[k] = 2.0 / den;
    }
    // exact annihilation of constants
    d1[1] = -(d1[0] + d1[2]);
    d2[1] = -(d2[0] + d2[2]);
    (d1, d2)
}

fn stencils(grid: &RadialGrid) -> Result<Vec<(usize, [f64; 3], [f64; 3])>> {
    let x = grid.nodes();
    let m = x.len();
    if m < 3 {
        return Err(LabError::param("grid", "need at least 3 nodes"));
    }
    Ok((0..m)
        .map(|i| {
            let s = i.saturating_sub(1).min(m - 3);
            let (d1, d2) = lagrange3([x[s], x[s + 1], x[s + 2]], x[i]);
            (s, d1, d2)
        })
        .collect())
}

/// First-derivative matrix.
pub fn gradient_matrix(grid: &RadialGrid) -> Result<DiffMatrix> {
    Ok(DiffMatrix {
        rows: stencils(grid)?.into_iter().map(|(s, d1, _)| (s, d1)).collect(),
    })
}

/// Radial Laplacian matrix `d²/dr² + (N-1)/r d/dr`.
pub fn laplacian_matrix(grid: &RadialGrid) -> Result<DiffMatrix> {
    let n1 = (grid.dim() - 1) as f64;
    let x = grid.nodes();
    Ok(DiffMatrix {
        rows: stencils(grid)?
            .into_iter()
            .enumerate()
            .map(|(i, (s, d1, d2))| (s, std::array::from_fn(|k| d2[k] + n1 * d1[k] / x[i])))
            .collect(),
    })
}

fn derived(u: &RadialFunction, m: DiffMatrix, exact: Option<Evaluator>) -> RadialFunction {
    let values = m.apply(u.values());
    RadialFunction::with_evaluator(Arc::clone(u.grid()), values, exact)
}

/// `u'` at the nodes; carries the analytic derivative when `u` has a profile.
pub fn gradient_radial(u: &RadialFunction) -> Result<RadialFunction> {
    let m = gradient_matrix(u.grid())?;
    Ok(derived(u, m, u.exact_derivative()))
}

/// `u'' + (N-1)u'/r` at the nodes; carries the analytic Laplacian when `u` has a profile.
pub fn laplacian_radial(u: &RadialFunction) -> Result<RadialFunction> {
    let m = laplacian_matrix(u.grid())?;
    Ok(derived(u, m, u.exact_laplacian()))
}
