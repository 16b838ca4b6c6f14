use rayon::prelude::*;

use super::fidelity::{fidelity, FidelityReport};
use super::profile::{AdamsProfile, CapVariant, SequenceIndex};
use crate::error::{LabError, Result};
use crate::functional_lab::{Convention, SobolevConstants, OVERFLOW_BUDGET};
use crate::radial_core::quadrature::panel_rule;
use crate::radial_core::WeightSpec;

fn check_increasing(list: &[SequenceIndex]) -> Result<()> {
    if list.is_empty() {
        return Err(LabError::param("n_list", "empty sweep"));
    }
    if list.windows(2).any(|w| !(w[1].ln() > w[0].ln())) {
        return Err(LabError::param("n_list", "must be strictly increasing"));
    }
    Ok(())
}

/// Fidelity reports along a sweep, computed in parallel and ordered by `n`.
pub fn fidelity_sweep(
    n_list: &[SequenceIndex],
    consts: &SobolevConstants,
    weight: &WeightSpec,
    convention: Convention,
    variant: CapVariant,
) -> Result<Vec<FidelityReport>> {
    check_increasing(n_list)?;
    let mut out = n_list
        .par_iter()
        .map(|&idx| {
            let p = AdamsProfile::new(idx, consts, convention, variant)?;
            fidelity(&p, weight)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| a.ln_n.total_cmp(&b.ln_n));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormTrendRow {
    pub ln_n: f64,
    /// `‖w_n‖^{N/2}`.
    pub total: f64,
    /// `|‖w_n‖^{N/2} - 1|`.
    pub deviation: f64,
    /// `L^{N/2}` share of the total.
    pub lebesgue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormTrend {
    pub convention: Convention,
    pub rows: Vec<NormTrendRow>,
    /// Deviation strictly decreasing along the sweep.
    pub decreasing: bool,
    /// `L^{N/2}` share strictly decreasing along the sweep.
    pub lebesgue_decreasing: bool,
}

/// `‖w_n‖^{N/2}` along a sweep and whether it approaches one.
pub fn norm_trend(
    n_list: &[SequenceIndex],
    consts: &SobolevConstants,
    weight: &WeightSpec,
    convention: Convention,
    variant: CapVariant,
) -> Result<NormTrend> {
    let reports = fidelity_sweep(n_list, consts, weight, convention, variant)?;
    let rows: Vec<NormTrendRow> = reports
        .iter()
        .map(|r| NormTrendRow {
            ln_n: r.ln_n,
            total: r.norm_total,
            deviation: (r.norm_total - 1.0).abs(),
            lebesgue: r.parts.lebesgue(),
        })
        .collect();
    let decreasing = rows.windows(2).all(|w| w[1].deviation < w[0].deviation);
    let lebesgue_decreasing = rows.windows(2).all(|w| w[1].lebesgue < w[0].lebesgue);
    Ok(NormTrend {
        convention,
        rows,
        decreasing,
        lebesgue_decreasing,
    })
}

/// Per-part decay along a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct PartDecay {
    pub name: &'static str,
    pub values: Vec<f64>,
    pub decreasing: bool,
    /// Smallest factor of decrease per decade of `n` over consecutive sweep points.
    pub min_factor_per_decade: f64,
    /// Least-squares slope of `ln part` against `ln n`.
    pub slope: f64,
}

/// Decay of the named parts along a sweep.
pub fn part_decay(reports: &[FidelityReport], names: &[&'static str]) -> Vec<PartDecay> {
    names
        .iter()
        .map(|&name| {
            let values: Vec<f64> = reports
                .iter()
                .map(|r| r.parts.named().iter().find(|(k, _)| *k == name).map(|p| p.1).unwrap_or(f64::NAN))
                .collect();
            let xs: Vec<f64> = reports.iter().map(|r| r.ln_n).collect();
            let decreasing = values.windows(2).all(|w| w[1] < w[0]);
            let min_factor_per_decade = values
                .windows(2)
                .zip(xs.windows(2))
                .map(|(v, x)| (v[0] / v[1]).powf(std::f64::consts::LN_10 / (x[1] - x[0])))
                .fold(f64::INFINITY, f64::min);
            let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
            let m = xs.len() as f64;
            let mx = xs.iter().sum::<f64>() / m;
            let my = ys.iter().sum::<f64>() / m;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            PartDecay {
                name,
                values,
                decreasing,
                min_factor_per_decade,
                slope: if sxx > 0.0 { sxy / sxx } else { f64::NAN },
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupVerdict {
    /// Largest value within 10× of the first, no overflow.
    Bounded,
    /// Strictly increasing with at least 10× growth.
    Growing,
    /// The exponent budget was exceeded somewhere along the sweep.
    Overflow,
    Inconclusive,
}

impl BlowupVerdict {
    pub fn name(self) -> &'static str {
        match self {
            BlowupVerdict::Bounded => "bounded",
            BlowupVerdict::Growing => "growing",
            BlowupVerdict::Overflow => "overflow",
            BlowupVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupRow {
    pub ln_n: f64,
    /// `ln ∫_{|x| ≤ n^{-1/N}} (e^{α|v_n|^γ} - 1)`.
    pub log_value: f64,
    /// `None` when `log_value` exceeds the overflow budget.
    pub value: Option<f64>,
    /// Largest exponent `α|v_n|^γ` on the cap.
    pub max_exponent: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupTable {
    pub alpha_ratio: f64,
    pub convention: Convention,
    pub rows: Vec<BlowupRow>,
    /// `value_last / value_first`, in log form.
    pub log_growth: f64,
    /// `max value / value_first`, in log form.
    pub log_max_ratio: f64,
    pub verdict: BlowupVerdict,
}

fn ln_expm1(x: f64) -> f64 {
    if x > 1.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// `ln ∫_{|x| ≤ n^{-1/N}} (e^{α|w_n/‖w_n‖|^γ} - 1) dx` and the largest exponent.
pub fn cap_log_integral(profile: &AdamsProfile, norm: f64, alpha: f64) -> (f64, f64) {
    const PANELS: usize = 64;
    let n = profile.dim as f64;
    let gamma = profile.gamma;
    let one_b = 1.0 - profile.beta;
    let ln_b1 = -profile.index.ln() / n;
    let top = profile.c0 * (profile.log_scale.powf(1.0 / gamma) + profile.cap_shift);
    let half = 0.5 * profile.cap_coeff();
    let exponent = |tau: f64| {
        let w = top - half * (2.0 * one_b * (ln_b1 - tau)).exp();
        alpha * (w / norm).abs().powf(gamma)
    };
    let span = 60.0 / n;
    let width = span / PANELS as f64;
    let mut terms = Vec::with_capacity(PANELS * 8);
    for k in 0..PANELS {
        let a = k as f64 * width;
        for (tau, wt) in panel_rule().points(a, a + width) {
            terms.push(wt.ln() - n * tau + ln_expm1(exponent(tau)));
        }
    }
    let omega = crate::functional_lab::sphere_area(profile.dim);
    (omega.ln() + n * ln_b1 + log_sum_exp(&terms), exponent(f64::INFINITY))
}

/// `∫_{|x| ≤ n^{-1/N}} (e^{α|v_n|^γ} - 1)` with `α = alpha_ratio·α_β` and
/// `v_n = w_n / ‖w_n‖`, along a sweep.
///
/// The integral is carried in log form; a value whose logarithm exceeds the
/// overflow budget is reported as overflow.
pub fn blowup_probe(
    alpha_ratio: f64,
    n_list: &[SequenceIndex],
    consts: &SobolevConstants,
    weight: &WeightSpec,
    convention: Convention,
    variant: CapVariant,
) -> Result<BlowupTable> {
    if !(alpha_ratio.is_finite() && alpha_ratio > 0.0) {
        return Err(LabError::param("alpha_ratio", format!("must be positive, got {alpha_ratio}")));
    }
    check_increasing(n_list)?;
    let alpha = alpha_ratio * consts.alpha_beta(convention)?;
    let dim = consts.dim;
    let mut rows = n_list
        .par_iter()
        .map(|&idx| {
            let p = AdamsProfile::new(idx, consts, convention, variant)?;
            let norm = fidelity(&p, weight)?.norm(dim);
            let (log_value, max_exponent) = cap_log_integral(&p, norm, alpha);
            Ok(BlowupRow {
                ln_n: idx.ln(),
                log_value,
                value: (log_value <= OVERFLOW_BUDGET).then(|| log_value.exp()),
                max_exponent,
                norm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.ln_n.total_cmp(&b.ln_n));
    let first = rows[0].log_value;
    let log_growth = rows[rows.len() - 1].log_value - first;
    let log_max_ratio = rows.iter().map(|r| r.log_value).fold(f64::NEG_INFINITY, f64::max) - first;
    let ten = 10f64.ln();
    let verdict = if rows.iter().any(|r| r.value.is_none()) {
        BlowupVerdict::Overflow
    } else if rows.windows(2).all(|w| w[1].log_value > w[0].log_value) && log_growth >= ten {
        BlowupVerdict::Growing
    } else if log_max_ratio <= ten {
        BlowupVerdict::Bounded
    } else {
        BlowupVerdict::Inconclusive
    };
    Ok(BlowupTable {
        alpha_ratio,
        convention,
        rows,
        log_growth,
        log_max_ratio,
        verdict,
    })
}
