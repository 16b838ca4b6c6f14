use std::fmt;
use std::sync::Arc;

use super::grid::RadialGrid;
use crate::error::{LabError, Result};

/// A radial profile with analytic first and second derivatives.
pub trait RadialProfile: Send + Sync {
    fn value(&self, r: f64) -> f64;
    fn derivative(&self, r: f64) -> f64;
    fn second_derivative(&self, r: f64) -> f64;
}

/// Closure-backed [`RadialProfile`].
pub struct ClosureProfile<F, D, S> {
    pub value: F,
    pub derivative: D,
    pub second: S,
}

impl<F, D, S> RadialProfile for ClosureProfile<F, D, S>
where
    F: Fn(f64) -> f64 + Send + Sync,
    D: Fn(f64) -> f64 + Send + Sync,
    S: Fn(f64) -> f64 + Send + Sync,
{
    fn value(&self, r: f64) -> f64 {
        (self.value)(r)
    }
    fn derivative(&self, r: f64) -> f64 {
        (self.derivative)(r)
    }
    fn second_derivative(&self, r: f64) -> f64 {
        (self.second)(r)
    }
}

struct Scaled {
    inner: Arc<dyn RadialProfile>,
    factor: f64,
}

impl RadialProfile for Scaled {
    fn value(&self, r: f64) -> f64 {
        self.factor * self.inner.value(r)
    }
    fn derivative(&self, r: f64) -> f64 {
        self.factor * self.inner.derivative(r)
    }
    fn second_derivative(&self, r: f64) -> f64 {
        self.factor * self.inner.second_derivative(r)
    }
}

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Exact {
    Value(Evaluator),
    Profile(Arc<dyn RadialProfile>),
}

/// Nodal samples of a radial function, optionally backed by an analytic evaluator.
///
/// Quadrature evaluates the analytic form when present and the piecewise cubic
/// interpolant (in `ln r`) of the nodal values otherwise.
#[derive(Clone)]
pub struct RadialFunction {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    exact: Option<Exact>,
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialFunction")
            .field("nodes", &self.values.len())
            .field("analytic", &self.exact.is_some())
            .finish()
    }
}

fn check_finite(grid: &RadialGrid, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(LabError::NonFinite {
            radius: grid.nodes()[i],
        }),
        None => Ok(()),
    }
}

impl RadialFunction {
    pub fn from_values(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::param(
                "values",
                format!("expected {} samples, got {}", grid.len(), values.len()),
            ));
        }
        check_finite(&grid, &values)?;
        Ok(RadialFunction {
            grid,
            values,
            exact: None,
        })
    }

    pub fn from_fn<F>(grid: Arc<RadialGrid>, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let values: Vec<f64> = grid.nodes().iter().map(|&r| f(r)).collect();
        check_finite(&grid, &values)?;
        Ok(RadialFunction {
            grid,
            values,
            exact: Some(Exact::Value(Arc::new(f))),
        })
    }

    pub fn from_profile(grid: Arc<RadialGrid>, profile: Arc<dyn RadialProfile>) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().iter().map(|&r| profile.value(r)).collect();
        check_finite(&grid, &values)?;
        Ok(RadialFunction {
            grid,
            values,
            exact: Some(Exact::Profile(profile)),
        })
    }

    pub fn zeros(grid: Arc<RadialGrid>) -> Self {
        let values = vec![0.0; grid.len()];
        RadialFunction {
            grid,
            values,
            exact: None,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_analytic(&self) -> bool {
        self.exact.is_some()
    }

    /// Analytic first derivative, if the function carries a profile.
    pub fn exact_derivative(&self) -> Option<Evaluator> {
        match &self.exact {
            Some(Exact::Profile(p)) => {
                let p = Arc::clone(p);
                Some(Arc::new(move |r| p.derivative(r)))
            }
            _ => None,
        }
    }

    /// Analytic radial Laplacian `u'' + (N-1) u'/r`, if the function carries a profile.
    pub fn exact_laplacian(&self) -> Option<Evaluator> {
        match &self.exact {
            Some(Exact::Profile(p)) => {
                let p = Arc::clone(p);
                let n1 = (self.dim() - 1) as f64;
                Some(Arc::new(move |r| {
                    p.second_derivative(r) + n1 * p.derivative(r) / r
                }))
            }
            _ => None,
        }
    }

    /// Drops the analytic form, keeping only the nodal samples.
    pub fn sampled(&self) -> Self {
        RadialFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.clone(),
            exact: None,
        }
    }

    pub(crate) fn with_evaluator(grid: Arc<RadialGrid>, values: Vec<f64>, exact: Option<Evaluator>) -> Self {
        RadialFunction {
            grid,
            values,
            exact: exact.map(Exact::Value),
        }
    }

    /// `c·u`, keeping analytic derivatives.
    pub fn scale(&self, c: f64) -> Self {
        let exact = self.exact.as_ref().map(|e| match e {
            Exact::Value(g) => {
                let g = Arc::clone(g);
                Exact::Value(Arc::new(move |r| c * g(r)))
            }
            Exact::Profile(p) => Exact::Profile(Arc::new(Scaled {
                inner: Arc::clone(p),
                factor: c,
            })),
        });
        RadialFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| c * v).collect(),
            exact,
        }
    }

    /// Pointwise transform; the analytic form, if any, is composed as well.
    pub fn map<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + Clone + 'static,
    {
        let values: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| f(r, v))
            .collect();
        check_finite(&self.grid, &values)?;
        let exact = self.exact.clone().map(|e| {
            let ev: Evaluator = match e {
                Exact::Value(g) => Arc::new(move |r| f(r, g(r))),
                Exact::Profile(p) => Arc::new(move |r| f(r, p.value(r))),
            };
            Exact::Value(ev)
        });
        Ok(RadialFunction {
            grid: Arc::clone(&self.grid),
            values,
            exact,
        })
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with<F>(&self, other: &RadialFunction, f: F) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> f64 + Send + Sync + Clone + 'static,
    {
        if !Arc::ptr_eq(&self.grid, &other.grid) && *self.grid != *other.grid {
            return Err(LabError::param("grid", "functions live on different grids"));
        }
        let values: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(&r, (&a, &b))| f(r, a, b))
            .collect();
        check_finite(&self.grid, &values)?;
        let exact = match (self.exact.is_some(), other.exact.is_some()) {
            (true, true) => {
                let a = self.clone();
                let b = other.clone();
                let ev: Evaluator = Arc::new(move |r| f(r, a.eval(r), b.eval(r)));
                Some(Exact::Value(ev))
            }
            _ => None,
        };
        Ok(RadialFunction {
            grid: Arc::clone(&self.grid),
            values,
            exact,
        })
    }

    /// Value at `r`: analytic if available, else cubic interpolation in `ln r`.
    pub fn eval(&self, r: f64) -> f64 {
        match &self.exact {
            Some(Exact::Value(g)) => g(r),
            Some(Exact::Profile(p)) => p.value(r),
            None => self.interpolate(self.grid.interval_of(r), r),
        }
    }

    /// Value at `r` known to lie in interval `i`.
    pub(crate) fn eval_in(&self, i: usize, r: f64) -> f64 {
        match &self.exact {
            Some(Exact::Value(g)) => g(r),
            Some(Exact::Profile(p)) => p.value(r),
            None => self.interpolate(i, r),
        }
    }

    /// Cubic Lagrange interpolation in `ln r` on the stencil `i-1..=i+2`,
    /// constant extension outside the grid.
    fn interpolate(&self, i: usize, r: f64) -> f64 {
        let nodes = self.grid.nodes();
        let m = nodes.len();
        if r <= nodes[0] {
            return self.values[0];
        }
        if r >= nodes[m - 1] {
            return self.values[m - 1];
        }
        let start = i.saturating_sub(1).min(m - 4);
        let t = r.ln();
        let ts: [f64; 4] = std::array::from_fn(|k| nodes[start + k].ln());
        let mut acc = 0.0;
        for k in 0..4 {
            let mut l = 1.0;
            for j in 0..4 {
                if j != k {
                    l *= (t - ts[j]) / (ts[k] - ts[j]);
                }
            }
            acc += l * self.values[start + k];
        }
        acc
    }
}
