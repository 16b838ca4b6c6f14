use super::nonlinearity::NonlinearitySpec;
use crate::error::{LabError, Result};
use crate::functional_lab::{Convention, SobolevConstants};

/// Outcome of one sampled hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub pass: bool,
    /// Worst sampled slack; negative means violated.
    pub margin: f64,
    pub note: String,
}

/// Constants `t₀`, `M₀`, `γ₀` declared for the exponential kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Declared {
    pub t0: f64,
    pub m0: f64,
    pub gamma0: f64,
}

/// `t₀` at half the overflow radius and `M₀` just above the sampled supremum
/// of `F/f` beyond it. `γ₀` is the smallest `f(t)t e^{-α₀|t|^γ}` over the
/// large samples, `|t| ≥ max|t|/4`, which needs no exponential.
pub fn declared_constants(spec: &NonlinearitySpec, sample_ts: &[f64]) -> Result<Option<Declared>> {
    if !spec.is_critical() {
        return Ok(None);
    }
    let top = spec.overflow_radius();
    let t0 = 0.5 * top;
    let mut m0: f64 = 0.0;
    for k in 0..=200 {
        let t = t0 * (top / t0).powf(k as f64 / 200.0);
        m0 = m0.max(spec.big_f(t)? / spec.f(t)?.abs());
    }
    let gamma0 = large_samples(sample_ts)
        .filter_map(|t| spec.h5_ratio(t))
        .fold(f64::INFINITY, f64::min);
    Ok(Some(Declared {
        t0,
        m0: 1.01 * m0,
        gamma0,
    }))
}

fn large_samples(sample_ts: &[f64]) -> impl Iterator<Item = f64> + '_ {
    let reach = sample_ts.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    sample_ts.iter().copied().filter(move |t| t.abs() >= 0.25 * reach && *t != 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub checks: Vec<HypothesisCheck>,
    pub declared: Option<Declared>,
    /// `V_N e^{N(1 - ln 2e)}`.
    pub h5_denominator: f64,
    /// `(α_β/α₀)^{N/(2γ)} / (V_N e^{N(1 - ln 2e)})`, exponential kind only.
    pub h5_threshold: Option<f64>,
    /// Fitted `C` of the growth envelope.
    pub envelope_c: f64,
}

impl HypothesisReport {
    pub fn get(&self, name: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `(H1)`, `(H2)` and `(H3)` hold on the samples.
    pub fn geometry_ready(&self) -> bool {
        ["H1", "H2", "H3"].iter().all(|n| self.get(n).is_some_and(|c| c.pass))
    }
}

/// Denominator `V_N e^{N(1 - ln 2e)}` of the `(H5)` threshold.
pub fn h5_denominator(consts: &SobolevConstants) -> f64 {
    let n = consts.dim as f64;
    consts.v_n * (n * (1.0 - (2.0 * std::f64::consts::E).ln())).exp()
}

/// `(α_β/α₀)^{N/(2γ)} / (V_N e^{N(1 - ln 2e)})`.
pub fn h5_threshold(consts: &SobolevConstants, alpha_beta: f64, alpha0: f64) -> f64 {
    let n = consts.dim as f64;
    (alpha_beta / alpha0).powf(n / (2.0 * consts.gamma)) / h5_denominator(consts)
}

const SMALL_T: f64 = 1e-2;
const ENVELOPE_EPS: f64 = 1e-3;

/// Samples `(H1)`-`(H5)` and the growth envelope on `sample_ts`.
///
/// Samples beyond the overflow radius of an exponential nonlinearity are
/// skipped everywhere except in `(H5)`, whose ratio is formed without the
/// exponential.
pub fn check_hypotheses(
    spec: &NonlinearitySpec,
    consts: &SobolevConstants,
    convention: Convention,
    sample_ts: &[f64],
) -> Result<HypothesisReport> {
    let n = consts.dim as f64;
    let reach = spec.overflow_radius();
    let ts: Vec<f64> = sample_ts.iter().copied().filter(|t| t.abs() <= reach && *t != 0.0).collect();
    if ts.is_empty() {
        return Err(LabError::param("sample_ts", "no usable nonzero samples"));
    }
    let mut fs = Vec::with_capacity(ts.len());
    let mut big = Vec::with_capacity(ts.len());
    for &t in &ts {
        let (f, bf) = (spec.f(t)?, spec.big_f(t)?);
        if !(f.is_finite() && bf.is_finite()) {
            return Err(LabError::NonFinite { radius: t });
        }
        fs.push(f);
        big.push(bf);
    }
    let mut checks = Vec::new();

    // a jump shows up as a one-sided difference far above h|f'(t)|
    let mut h1_ratio: f64 = 0.0;
    for (&t, &f) in ts.iter().zip(&fs) {
        let h = 1e-7 * t.abs();
        let slope = spec.f_prime(t)?.abs();
        let jump = (spec.f(t + h.copysign(-t))? - f).abs();
        h1_ratio = h1_ratio.max(jump / (h * slope).max(f64::MIN_POSITIVE));
    }
    checks.push(HypothesisCheck {
        name: "H1",
        pass: h1_ratio <= 2.0,
        margin: 2.0 - h1_ratio,
        note: format!("largest |f(t+h) - f(t)|/(h|f'(t)|) at h = 1e-7|t|: {h1_ratio:.3e}"),
    });

    let theta = spec.declared_theta();
    let mut h2 = f64::INFINITY;
    let mut f_positive = true;
    for ((&t, &f), &bf) in ts.iter().zip(&fs).zip(&big) {
        let tf = t * f;
        h2 = h2.min((tf - theta * bf) / tf.abs().max(1e-300));
        f_positive &= bf > 0.0;
    }
    checks.push(HypothesisCheck {
        name: "H2",
        pass: theta > n && f_positive && h2 >= -1e-12,
        margin: h2,
        note: format!("theta = {theta}, N = {n}, min (tf - theta F)/|tf| = {h2:.3e}"),
    });

    let mut small: Vec<(f64, f64)> = ts
        .iter()
        .zip(&fs)
        .filter(|(t, _)| t.abs() <= SMALL_T)
        .map(|(&t, &f)| (t.abs(), f.abs() / t.abs().powf(n / 2.0 - 1.0)))
        .collect();
    small.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (h3_pass, h3_margin, h3_note) = match small.first() {
        None => (false, f64::NAN, format!("no samples with |t| <= {SMALL_T}")),
        Some(&(t, ratio)) => {
            let monotone = small.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
            (
                monotone && ratio < 1e-6,
                1e-6 - ratio,
                format!("|f(t)|/|t|^(N/2-1) = {ratio:.3e} at |t| = {t:.1e}"),
            )
        }
    };
    checks.push(HypothesisCheck {
        name: "H3",
        pass: h3_pass,
        margin: h3_margin,
        note: h3_note,
    });

    let declared = declared_constants(spec, sample_ts)?;
    match declared {
        Some(d) => {
            let mut m = f64::INFINITY;
            for ((&t, &f), &bf) in ts.iter().zip(&fs).zip(&big) {
                if t.abs() >= d.t0 {
                    m = m.min((d.m0 * f.abs() - bf) / bf);
                }
            }
            checks.push(HypothesisCheck {
                name: "H4",
                pass: m >= 0.0,
                margin: m,
                note: format!("t0 = {:.4e}, M0 = {:.4e}", d.t0, d.m0),
            });
        }
        None => {
            // F/|f| = |t|/θ for a pure power
            let mut beyond: Vec<(f64, f64)> = ts
                .iter()
                .zip(&fs)
                .zip(&big)
                .filter(|((t, _), _)| t.abs() >= 1.0)
                .map(|((&t, &f), &bf)| (t.abs(), bf / f.abs()))
                .collect();
            beyond.sort_by(|a, b| a.0.total_cmp(&b.0));
            let growing = beyond.len() >= 2
                && beyond.windows(2).all(|w| w[1].1 >= w[0].1)
                && beyond[beyond.len() - 1].1 > beyond[0].1;
            let sup = beyond.iter().map(|b| b.1).fold(0.0, f64::max);
            checks.push(HypothesisCheck {
                name: "H4",
                pass: !growing && !beyond.is_empty(),
                margin: if growing { -sup } else { sup },
                note: format!("F/|f| on |t| >= 1 reaches {sup:.4e}{}", if growing { " and keeps growing" } else { "" }),
            });
        }
    }

    let denominator = h5_denominator(consts);
    let mut threshold = None;
    if let (Some(alpha0), Some(d)) = (spec.alpha0(), declared) {
        let alpha_beta = consts.alpha_beta(convention)?;
        let thr = h5_threshold(consts, alpha_beta, alpha0);
        threshold = Some(thr);
        let lowest = large_samples(sample_ts)
            .filter_map(|t| spec.h5_ratio(t))
            .fold(f64::INFINITY, f64::min);
        checks.push(HypothesisCheck {
            name: "H5",
            pass: d.gamma0.is_finite() && d.gamma0 > thr && lowest >= d.gamma0 * (1.0 - 1e-12),
            margin: d.gamma0 - thr,
            note: format!("gamma0 = {:.4e}, threshold = {thr:.4e}", d.gamma0),
        });
    }

    // |f| ≤ ε|t|^{N/2-1} + C|t|^{q-1}(e^{a|t|^γ} - 1), q = N + 1, a just above α₀
    let q_env = n + 1.0;
    let gamma = match *spec {
        NonlinearitySpec::CriticalExp { gamma, .. } => gamma,
        _ => consts.gamma,
    };
    let a = spec.alpha0().map_or(1.0, |a0| 1.01 * a0);
    let mut c_fit: f64 = 0.0;
    for (&t, &f) in ts.iter().zip(&fs) {
        let excess = f.abs() - ENVELOPE_EPS * t.abs().powf(n / 2.0 - 1.0);
        if excess > 0.0 {
            let x = a * t.abs().powf(gamma);
            let log_env = (q_env - 1.0) * t.abs().ln() + if x > 1.0 { x + (-(-x).exp()).ln_1p() } else { x.exp_m1().ln() };
            c_fit = c_fit.max((excess.ln() - log_env).exp());
        }
    }
    checks.push(HypothesisCheck {
        name: "envelope",
        pass: c_fit.is_finite(),
        margin: c_fit,
        note: format!("eps = {ENVELOPE_EPS}, q = {q_env}, a = {a:.4e}, fitted C = {c_fit:.4e}"),
    });

    Ok(HypothesisReport {
        checks,
        declared,
        h5_denominator: denominator,
        h5_threshold: threshold,
        envelope_c: c_fit,
    })
}

/// Geometric sample of `±t` from `1e-6` up to `t_max`.
pub fn default_samples(t_max: f64, count: usize) -> Vec<f64> {
    let lo: f64 = 1e-6;
    let step = (t_max / lo).ln() / (count.max(2) - 1) as f64;
    (0..count)
        .map(|k| lo * (k as f64 * step).exp())
        .flat_map(|t| [t, -t])
        .collect()
}
