use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::adams_sequence::{CapVariant, SequenceIndex};
use crate::functional_lab::Convention;
use crate::radial_core::{beta_interval, Tail, WeightSpec};

/// Experiment selected by `command=`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Constants,
    Norms,
    AdamsSweep,
    Sharpness,
    Solve,
    Hypotheses,
    Admissibility,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Constants,
        Command::Norms,
        Command::AdamsSweep,
        Command::Sharpness,
        Command::Solve,
        Command::Hypotheses,
        Command::Admissibility,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Constants => "constants",
            Command::Norms => "norms",
            Command::AdamsSweep => "adams-sweep",
            Command::Sharpness => "sharpness",
            Command::Solve => "solve",
            Command::Hypotheses => "hypotheses",
            Command::Admissibility => "admissibility",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConventionChoice {
    General,
    FourDim,
    Both,
}

impl ConventionChoice {
    pub fn list(self) -> Vec<Convention> {
        match self {
            ConventionChoice::General => vec![Convention::General],
            ConventionChoice::FourDim => vec![Convention::FourDim],
            ConventionChoice::Both => Convention::ALL.to_vec(),
        }
    }

    /// The single convention used where only one makes sense.
    pub fn primary(self) -> Convention {
        match self {
            ConventionChoice::FourDim => Convention::FourDim,
            _ => Convention::General,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonlinearityKind {
    Power,
    Exp,
}

/// Validated run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub dim: usize,
    pub beta: f64,
    pub tail: Tail,
    pub m: f64,
    pub radius: f64,
    pub inner_count: usize,
    pub outer_count: usize,
    pub n_list: Vec<SequenceIndex>,
    pub alpha_ratios: Vec<f64>,
    pub convention: ConventionChoice,
    pub cap: CapVariant,
    pub beta_list: Vec<f64>,
    pub nonlinearity: NonlinearityKind,
    pub theta: f64,
    pub lambda: f64,
    pub alpha0_ratio: f64,
    pub q: f64,
    pub seed: u64,
    pub knots: usize,
    pub tol: f64,
    pub max_rounds: usize,
    pub t_max: f64,
    pub samples: usize,
    pub r_max: f64,
    pub plot: bool,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            dim: 4,
            beta: 0.5,
            tail: Tail::constant(),
            m: 1.0,
            radius: 8.0,
            inner_count: 128,
            outer_count: 128,
            n_list: [1e3, 1e5, 1e7]
                .iter()
                .map(|&n| SequenceIndex::new(n).expect("finite"))
                .collect(),
            alpha_ratios: vec![0.9, 1.1],
            convention: ConventionChoice::General,
            cap: CapVariant::Printed,
            beta_list: vec![0.9, 0.75, 0.5, 0.3, 0.1, 1e-2, 1e-4, 1e-6],
            nonlinearity: NonlinearityKind::Power,
            theta: 5.0,
            lambda: 1.0,
            alpha0_ratio: 10.0,
            q: 2.0,
            seed: 0x5eed,
            knots: 32,
            tol: 1e-8,
            max_rounds: 2000,
            t_max: 100.0,
            samples: 64,
            r_max: 1e6,
            plot: true,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn weight(&self) -> crate::Result<WeightSpec> {
        WeightSpec::new(self.dim, self.beta, self.tail.clone(), self.m)
    }
}

/// Parse failure naming the offending key and line (0 for whole-file checks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: key `{}`: {}", self.line, self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn scalar<T: FromStr>(v: &str, what: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("expected {what}, got `{v}`"))
}

fn list(v: &str) -> Result<Vec<f64>, String> {
    v.split(',').map(|x| scalar::<f64>(x.trim(), "a comma-separated list of reals")).collect()
}

fn flag(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got `{v}`")),
    }
}

fn positive(x: f64) -> Result<f64, String> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive and finite, got {x}"))
    }
}

#[derive(Default)]
struct TailKeys {
    kind: Option<(usize, String)>,
    delta: Option<(usize, f64)>,
    sigma: Option<(usize, f64)>,
    knots: Option<(usize, Vec<(f64, f64)>)>,
}

/// Parses `key=value` lines; `#` starts a comment, lists are comma-separated.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut tail = TailKeys::default();
    let mut lines = std::collections::HashMap::new();
    let mut n_list_line = None;
    let mut ln_n_line = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(ConfigError {
                line,
                key: body.to_string(),
                message: "expected key=value".into(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let err = |message: String| ConfigError {
            line,
            key: key.to_string(),
            message,
        };
        if lines.insert(key.to_string(), line).is_some() {
            return Err(err("key given twice".into()));
        }
        match key {
            "command" => cfg.command = Some(value.parse().map_err(err)?),
            "N" => cfg.dim = scalar(value, "an integer").map_err(err)?,
            "beta" => cfg.beta = scalar(value, "a real").map_err(err)?,
            "tail" => tail.kind = Some((line, value.to_string())),
            "tail_delta" => tail.delta = Some((line, scalar(value, "a real").map_err(err)?)),
            "tail_sigma" => tail.sigma = Some((line, scalar(value, "a real").map_err(err)?)),
            "tail_knots" => {
                let knots = value
                    .split(',')
                    .map(|pair| {
                        let (t, v) = pair
                            .trim()
                            .split_once(':')
                            .ok_or_else(|| format!("expected t:value pairs, got `{pair}`"))?;
                        Ok((scalar(t.trim(), "a real")?, scalar(v.trim(), "a real")?))
                    })
                    .collect::<Result<Vec<_>, String>>()
                    .map_err(err)?;
                tail.knots = Some((line, knots));
            }
            "m" => cfg.m = scalar(value, "a real").and_then(positive).map_err(err)?,
            "R" => cfg.radius = scalar(value, "a real").map_err(err)?,
            "inner_count" => cfg.inner_count = scalar(value, "an integer").map_err(err)?,
            "outer_count" => cfg.outer_count = scalar(value, "an integer").map_err(err)?,
            "n_list" => {
                cfg.n_list = list(value)
                    .and_then(|ns| ns.into_iter().map(|n| SequenceIndex::new(n).map_err(|e| e.to_string())).collect())
                    .map_err(err)?;
                n_list_line = Some(line);
            }
            "ln_n_list" => {
                cfg.n_list = list(value)
                    .and_then(|ls| ls.into_iter().map(|l| SequenceIndex::from_ln(l).map_err(|e| e.to_string())).collect())
                    .map_err(err)?;
                ln_n_line = Some(line);
            }
            "alpha_ratio" => {
                cfg.alpha_ratios = list(value)
                    .and_then(|v| v.into_iter().map(positive).collect())
                    .map_err(err)?
            }
            "convention" => {
                cfg.convention = match value {
                    "general" => ConventionChoice::General,
                    "fourdim" => ConventionChoice::FourDim,
                    "both" => ConventionChoice::Both,
                    _ => return Err(err(format!("expected general, fourdim or both, got `{value}`"))),
                }
            }
            "cap" => {
                cfg.cap = match value {
                    "printed" => CapVariant::Printed,
                    "continuous" => CapVariant::Continuous,
                    _ => return Err(err(format!("expected printed or continuous, got `{value}`"))),
                }
            }
            "beta_list" => {
                cfg.beta_list = list(value).map_err(err)?;
                if let Some(b) = cfg.beta_list.iter().find(|b| !(**b > 0.0 && **b < 1.0)) {
                    return Err(err(format!("every beta must lie in (0, 1), got {b}")));
                }
            }
            "nonlinearity" => {
                cfg.nonlinearity = match value {
                    "power" => NonlinearityKind::Power,
                    "exp" => NonlinearityKind::Exp,
                    _ => return Err(err(format!("expected power or exp, got `{value}`"))),
                }
            }
            "theta" => cfg.theta = scalar(value, "a real").map_err(err)?,
            "lambda" => cfg.lambda = scalar(value, "a real").and_then(positive).map_err(err)?,
            "alpha0_ratio" => cfg.alpha0_ratio = scalar(value, "a real").and_then(positive).map_err(err)?,
            "q" => cfg.q = scalar(value, "a real").map_err(err)?,
            "seed" => cfg.seed = scalar(value, "an unsigned integer").map_err(err)?,
            "knots" => cfg.knots = scalar(value, "an integer").map_err(err)?,
            "tol" => cfg.tol = scalar(value, "a real").and_then(positive).map_err(err)?,
            "max_rounds" => cfg.max_rounds = scalar(value, "an integer").map_err(err)?,
            "t_max" => cfg.t_max = scalar(value, "a real").and_then(positive).map_err(err)?,
            "samples" => cfg.samples = scalar(value, "an integer").map_err(err)?,
            "r_max" => cfg.r_max = scalar(value, "a real").map_err(err)?,
            "plot" => cfg.plot = flag(value).map_err(err)?,
            "out" => cfg.out = Some(PathBuf::from(value)),
            _ => return Err(err("unknown key".into())),
        }
    }

    let at = |key: &str| lines.get(key).copied().unwrap_or(0);
    let fail = |key: &str, message: String| ConfigError {
        line: at(key),
        key: key.to_string(),
        message,
    };
    if let (Some(_), Some(l)) = (n_list_line, ln_n_line) {
        return Err(ConfigError {
            line: l,
            key: "ln_n_list".into(),
            message: "give either n_list or ln_n_list, not both".into(),
        });
    }
    if cfg.dim < 4 || cfg.dim % 2 != 0 {
        return Err(fail("N", format!("must be an even integer >= 4, got {}", cfg.dim)));
    }
    let (lo, hi) = beta_interval(cfg.dim);
    if !(cfg.beta > lo && cfg.beta < hi) {
        return Err(fail(
            "beta",
            format!("beta = {} outside ({lo}, {hi}) for N={}", cfg.beta, cfg.dim),
        ));
    }
    cfg.tail = build_tail(tail)?;
    if !(cfg.radius.is_finite() && cfg.radius > 1.0) {
        return Err(fail("R", format!("must exceed 1, got {}", cfg.radius)));
    }
    for (key, v) in [("inner_count", cfg.inner_count), ("outer_count", cfg.outer_count)] {
        if v < crate::radial_core::MIN_SEGMENT_NODES {
            return Err(fail(key, format!("need at least {} nodes, got {v}", crate::radial_core::MIN_SEGMENT_NODES)));
        }
    }
    if cfg.n_list.windows(2).any(|w| !(w[1].ln() > w[0].ln())) {
        let key = if ln_n_line.is_some() { "ln_n_list" } else { "n_list" };
        return Err(fail(key, "must be strictly increasing".into()));
    }
    let floor = cfg.dim as f64 * std::f64::consts::LN_2;
    if let Some(i) = cfg.n_list.iter().find(|i| i.ln() <= floor) {
        let key = if ln_n_line.is_some() { "ln_n_list" } else { "n_list" };
        return Err(fail(key, format!("every n must exceed 2^N, got ln n = {}", i.ln())));
    }
    if cfg.nonlinearity == NonlinearityKind::Power && !(cfg.theta > cfg.dim as f64) {
        return Err(fail("theta", format!("must exceed N = {}, got {}", cfg.dim, cfg.theta)));
    }
    if !(cfg.q >= 2.0) {
        return Err(fail("q", format!("must be at least 2, got {}", cfg.q)));
    }
    if cfg.knots < 3 {
        return Err(fail("knots", format!("need at least 3, got {}", cfg.knots)));
    }
    if cfg.samples < 16 {
        return Err(fail("samples", format!("need at least 16, got {}", cfg.samples)));
    }
    if !(cfg.r_max.is_finite() && cfg.r_max > 1.0) {
        return Err(fail("r_max", format!("must exceed 1, got {}", cfg.r_max)));
    }
    // N, beta and m are already checked, so what remains is the tail
    if let Err(e) = cfg.weight() {
        let key = match &e {
            crate::LabError::InvalidParameter { name, .. } if *name == "delta" => "tail_delta",
            crate::LabError::InvalidParameter { name, .. } if *name == "sigma" => "tail_sigma",
            _ if lines.contains_key("tail_knots") => "tail_knots",
            _ => "tail",
        };
        return Err(fail(key, e.to_string()));
    }
    Ok(cfg)
}

fn build_tail(keys: TailKeys) -> Result<Tail, ConfigError> {
    let (line, kind) = keys.kind.unwrap_or((0, "constant".into()));
    let missing = |key: &str| ConfigError {
        line,
        key: key.into(),
        message: format!("required by tail={kind}"),
    };
    let tail = match kind.as_str() {
        "constant" => Tail::constant(),
        "bounded" => Tail::Bounded {
            knots: keys.knots.ok_or_else(|| missing("tail_knots"))?.1,
        },
        "power" => Tail::Power {
            delta: keys.delta.ok_or_else(|| missing("tail_delta"))?.1,
        },
        "log" => Tail::Log {
            sigma: keys.sigma.ok_or_else(|| missing("tail_sigma"))?.1,
        },
        _ => {
            return Err(ConfigError {
                line,
                key: "tail".into(),
                message: format!("expected constant, bounded, power or log, got `{kind}`"),
            })
        }
    };
    Ok(tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = parse_config("command=constants\nN=4\nbeta=0.5").unwrap();
        assert_eq!(c.command, Some(Command::Constants));
        assert_eq!((c.dim, c.beta), (4, 0.5));
        assert_eq!(c.radius, RunConfig::default().radius);
    }

    #[test]
    fn beta_out_of_range_names_the_key() {
        let e = parse_config("# comment\nbeta=1.5").unwrap_err();
        assert_eq!((e.key.as_str(), e.line), ("beta", 2));
        assert!(e.message.contains("N=4"));
    }

    #[test]
    fn unknown_command_and_key() {
        let e = parse_config("command=warp").unwrap_err();
        assert!(e.message.contains("unknown command"));
        let e = parse_config("N=4\nwarp=1").unwrap_err();
        assert_eq!((e.key.as_str(), e.line), ("warp", 2));
    }

    #[test]
    fn type_mismatch() {
        let e = parse_config("R=far").unwrap_err();
        assert_eq!(e.key, "R");
        assert!(e.message.contains("expected a real"));
    }

    #[test]
    fn lists_and_tails() {
        let c = parse_config("n_list=1e3, 1e5\nalpha_ratio=0.9,1.1\ntail=power\ntail_delta=0.5 # comment").unwrap();
        assert_eq!(c.n_list.len(), 2);
        assert_eq!(c.tail, Tail::Power { delta: 0.5 });
        assert!(parse_config("tail=power").is_err());
        assert!(parse_config("n_list=1e5,1e3").is_err());
        assert!(parse_config("n_list=1e3\nln_n_list=10").is_err());
        assert!(parse_config("theta=3").is_err());
    }
}
