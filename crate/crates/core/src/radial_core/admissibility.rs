//! Tail conditions on `χ` and the Muckenhoupt ball probe.

use super::quadrature::{adaptive, volume_integral};
use super::weight::WeightSpec;
use crate::error::{LabError, Result};

/// Summary of one tail condition over the sampled radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionSummary {
    pub max: f64,
    pub argmax: f64,
    /// Still growing at an undiminished pace over the last third of `ln r`.
    pub unbounded: bool,
    pub pass: bool,
}

/// One sampled radius with the three left-hand sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionSample {
    pub r: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub m: f64,
    pub x1: ConditionSummary,
    pub x2: ConditionSummary,
    pub x3: ConditionSummary,
    pub samples: Vec<ConditionSample>,
    pub pass: bool,
}

/// `∫_a^b t^{N-1} g(t) dt`, in `ln t`.
fn tail_integral<G: Fn(f64) -> f64>(dim: usize, g: G, a: f64, b: f64, kinks: &[f64]) -> Result<f64> {
    let n = dim as f64;
    let h = |s: f64| (n * s).exp() * g(s.exp());
    let mut pts = vec![a];
    pts.extend(kinks.iter().copied().filter(|&k| k > a && k < b));
    pts.push(b);
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += adaptive(&h, w[0].ln(), w[1].ln(), 1e-12)?;
    }
    Ok(total)
}

fn oscillation(spec: &WeightSpec, r: f64) -> f64 {
    const PROBES: usize = 64;
    let tail = spec.tail();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let step = 4f64.ln() / (PROBES - 1) as f64;
    let kinks = tail.kinks(r, 4.0 * r);
    for t in (0..PROBES)
        .map(|k| r * (k as f64 * step).exp())
        .chain(kinks)
    {
        let v = tail.eval(t);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    hi / lo
}

fn summarize(rs: &[f64], vals: &[f64], m: f64) -> ConditionSummary {
    let (k, &max) = vals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least one sample");
    let last = vals.len() - 1;
    let span = rs[last].ln();
    let at = |frac: f64| {
        let target = frac * span;
        let j = rs.partition_point(|r| r.ln() < target).min(last);
        vals[j]
    };
    let (v0, v1, v2) = (at(1.0 / 3.0), at(2.0 / 3.0), vals[last]);
    let inc_prev = v1 - v0;
    let inc_last = v2 - v1;
    let unbounded = inc_last > 0.01 * v2.abs() && inc_last >= 0.9 * inc_prev;
    ConditionSummary {
        max,
        argmax: rs[k],
        unbounded,
        pass: max <= m && !unbounded,
    }
}

/// Evaluates the three tail conditions on `samples` geometric radii in `[1, r_max]`.
pub fn check_chi_conditions(spec: &WeightSpec, r_max: f64, samples: usize) -> Result<AdmissibilityReport> {
    if !(r_max.is_finite() && r_max > 1.0) {
        return Err(LabError::param("r_max", format!("must exceed 1, got {r_max}")));
    }
    if samples < 16 {
        return Err(LabError::param("samples", format!("need at least 16, got {samples}")));
    }
    let dim = spec.dim();
    let n = dim as f64;
    let tail = spec.tail();
    let step = r_max.ln() / (samples - 1) as f64;
    let rs: Vec<f64> = (0..samples)
        .map(|k| if k + 1 == samples { r_max } else { (k as f64 * step).exp() })
        .collect();
    let mut a = 0.0;
    let mut b = 0.0;
    let mut out = Vec::with_capacity(samples);
    for (k, &r) in rs.iter().enumerate() {
        if k > 0 {
            let lo = rs[k - 1];
            let kinks = tail.kinks(lo, r);
            a += tail_integral(dim, |t| tail.eval(t), lo, r, &kinks)?;
            b += tail_integral(dim, |t| 1.0 / tail.eval(t), lo, r, &kinks)?;
        }
        let scale = r.powf(n * n / 2.0);
        out.push(ConditionSample {
            r,
            x1: a * b.powf(n / 2.0 - 1.0) / scale,
            x2: a / scale,
            x3: oscillation(spec, r),
        });
    }
    let m = spec.m();
    let col = |f: fn(&ConditionSample) -> f64| out.iter().map(f).collect::<Vec<_>>();
    let x1 = summarize(&rs, &col(|s| s.x1), m);
    let x2 = summarize(&rs, &col(|s| s.x2), m);
    let x3 = summarize(&rs, &col(|s| s.x3), m);
    Ok(AdmissibilityReport {
        m,
        x1,
        x2,
        x3,
        pass: x1.pass && x2.pass && x3.pass,
        samples: out,
    })
}

/// One probed ball: center distance, radius and the averaged product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallProbe {
    pub center: f64,
    pub radius: f64,
    pub product: f64,
}

/// `(|B|⁻¹∫_B w)(|B|⁻¹∫_B w⁻¹)^{N/2-1}` over every center/radius pair,
/// each ball `B(x₀, ρ)` replaced by the annulus `max(0, |x₀|-ρ) ≤ |x| ≤ |x₀|+ρ`.
pub fn muckenhoupt_balls(spec: &WeightSpec, centers: &[f64], radii: &[f64]) -> Result<Vec<BallProbe>> {
    if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(LabError::param("radii", format!("ball radius must be positive, got {r}")));
    }
    if let Some(c) = centers.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
        return Err(LabError::param("centers", format!("center distance must be >= 0, got {c}")));
    }
    let dim = spec.dim();
    let n = dim as f64;
    let vol = crate::functional_lab::unit_ball_volume(dim);
    let mut out = Vec::with_capacity(centers.len() * radii.len());
    for &c in centers {
        for &rho in radii {
            let a = (c - rho).max(0.0);
            let b = c + rho;
            let measure = vol * (b.powf(n) - a.powf(n));
            let w = volume_integral(dim, |r| spec.value(r), a, b)? / measure;
            let winv = volume_integral(dim, |r| 1.0 / spec.value(r), a, b)? / measure;
            out.push(BallProbe {
                center: c,
                radius: rho,
                product: w * winv.powf(n / 2.0 - 1.0),
            });
        }
    }
    Ok(out)
}

/// Largest sampled Muckenhoupt product; see [`muckenhoupt_balls`].
pub fn muckenhoupt_probe(spec: &WeightSpec, centers: &[f64], radii: &[f64]) -> Result<f64> {
    Ok(muckenhoupt_balls(spec, centers, radii)?
        .iter()
        .map(|b| b.product)
        .fold(f64::NEG_INFINITY, f64::max))
}
