use std::sync::Arc;

use rayon::prelude::*;

use super::config::{Command, NonlinearityKind, RunConfig};
use super::output::{num, opt, Plot, Table};
use super::{CliError, RunOutput};
use crate::adams_sequence::{adams_fn, blowup_probe, fidelity_sweep, part_decay};
use crate::functional_lab::{constants, constants_unchecked, e_norm, Convention, SobolevConstants};
use crate::mountain_pass::{
    check_hypotheses, default_samples, h5_denominator, mountain_pass_solve, GeometryOptions, NonlinearitySpec,
    SolveOptions,
};
use crate::radial_core::{build_grid, check_chi_conditions, muckenhoupt_balls, RadialFunction};

/// Parts whose decay the sweep summarizes.
const PART_NAMES: [&str; 9] = ["i1", "i2", "i3", "i1p", "i2p", "i3p", "l1", "l2", "l3"];

const DECAY_PARTS: [&str; 5] = ["i1", "i1p", "i2p", "i3", "i3p"];

fn flag(b: bool) -> String {
    b.to_string()
}

/// Runs one experiment in memory; nothing touches the disk here.
pub fn run_command(command: Command, cfg: &RunConfig) -> Result<RunOutput, CliError> {
    match command {
        Command::Constants => run_constants(cfg),
        Command::Norms => run_norms(cfg),
        Command::AdamsSweep => run_adams_sweep(cfg),
        Command::Sharpness => run_sharpness(cfg),
        Command::Solve => run_solve(cfg),
        Command::Hypotheses => run_hypotheses(cfg),
        Command::Admissibility => run_admissibility(cfg),
    }
}

fn done(tables: Vec<Table>, plots: Vec<Plot>) -> Result<RunOutput, CliError> {
    Ok(RunOutput {
        tables,
        plots,
        failure: None,
    })
}

/// Conventions asked for that exist in this dimension.
fn conventions(cfg: &RunConfig, consts: &SobolevConstants) -> Result<Vec<Convention>, CliError> {
    let list: Vec<Convention> = cfg
        .convention
        .list()
        .into_iter()
        .filter(|c| consts.alpha_beta(*c).is_ok())
        .collect();
    if list.is_empty() {
        return Err(CliError::validation(format!("convention fourdim needs N=4, got N={}", cfg.dim)));
    }
    Ok(list)
}

fn run_constants(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let mut t = Table::new(
        "constants",
        &["N", "beta", "admissible", "gamma", "alpha_general", "alpha_fourdim", "v_n"],
    );
    let mut plot = Plot::new("constants", "sharp exponent against beta", "log10 beta", "log10 alpha_beta");
    let mut general = Vec::new();
    let mut fourdim = Vec::new();
    for &beta in &cfg.beta_list {
        let c = constants_unchecked(cfg.dim, beta)?;
        t.push(vec![
            cfg.dim.to_string(),
            num(beta),
            flag(c.admissible()),
            num(c.gamma),
            num(c.alpha_beta_general),
            opt(c.alpha_beta_fourdim),
            num(c.v_n),
        ]);
        general.push((beta.log10(), c.alpha_beta_general.log10()));
        if let Some(a) = c.alpha_beta_fourdim {
            fourdim.push((beta.log10(), a.log10()));
        }
    }
    plot.add("general", general);
    if !fourdim.is_empty() {
        plot.add("fourdim", fourdim);
    }
    done(vec![t], vec![plot])
}

fn run_norms(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let weight = cfg.weight()?;
    let consts = constants(cfg.dim, cfg.beta)?;
    let grid = Arc::new(build_grid(cfg.dim, cfg.radius, cfg.inner_count, cfg.outer_count)?);
    let radius = cfg.radius;
    let mut t = Table::new(
        "norms",
        &["profile", "convention", "ln_n", "bil_term", "grad_term", "lp_term", "total", "norm"],
    );
    let row = |name: &str, conv: &str, ln_n: String, u: &RadialFunction| -> Result<Vec<String>, CliError> {
        let b = e_norm(u, &weight)?;
        Ok(vec![
            name.to_string(),
            conv.to_string(),
            ln_n,
            num(b.bil_term),
            num(b.grad_term),
            num(b.lp_term),
            num(b.total),
            num(b.norm),
        ])
    };
    let gauss = RadialFunction::from_fn(Arc::clone(&grid), |r| (-r * r).exp())?;
    let bump = RadialFunction::from_fn(Arc::clone(&grid), move |r| (1.0 - (r / radius).powi(2)).max(0.0).powi(4))?;
    t.push(row("gaussian", "", String::new(), &gauss)?);
    t.push(row("bump", "", String::new(), &bump)?);

    let mut plot = Plot::new("norms", "weighted norm of the Adams sequence", "log10 n", "norm^(N/2)");
    for conv in conventions(cfg, &consts)? {
        let rows = cfg
            .n_list
            .par_iter()
            .map(|idx| {
                let (_, u) = adams_fn(idx.value(), &consts, conv, cfg.cap)?;
                row(&format!("adams_{}", conv.name()), conv.name(), num(idx.ln()), &u)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let pts = cfg
            .n_list
            .iter()
            .zip(&rows)
            .map(|(idx, r)| (idx.log10(), r[6].parse().unwrap_or(f64::NAN)))
            .collect();
        plot.add(conv.name(), pts);
        t.rows.extend(rows);
    }
    done(vec![t], vec![plot])
}

fn run_adams_sweep(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let weight = cfg.weight()?;
    let consts = constants(cfg.dim, cfg.beta)?;
    let mut header = vec![
        "convention",
        "cap",
        "ln_n",
        "log10_n",
        "norm_total",
        "deviation",
        "continuity_gap1",
        "continuity_gap2",
    ];
    let part_names: Vec<&'static str> = PART_NAMES.to_vec();
    header.extend(&part_names);
    let mut t = Table::new("adams_sweep", &header);
    let mut d = Table::new(
        "adams_sweep_decay",
        &["convention", "part", "decreasing", "min_factor_per_decade", "slope"],
    );
    let mut plot = Plot::new("adams_sweep", "distance of the norm from one", "log10 n", "log10 |norm^(N/2) - 1|");
    for conv in conventions(cfg, &consts)? {
        let reports = fidelity_sweep(&cfg.n_list, &consts, &weight, conv, cfg.cap)?;
        let mut pts = Vec::new();
        for r in &reports {
            let dev = (r.norm_total - 1.0).abs();
            let log10_n = r.ln_n / std::f64::consts::LN_10;
            pts.push((log10_n, dev.log10()));
            let mut row = vec![
                conv.name().to_string(),
                cfg.cap.name().to_string(),
                num(r.ln_n),
                num(log10_n),
                num(r.norm_total),
                num(dev),
                num(r.continuity_gap1),
                num(r.continuity_gap2),
            ];
            row.extend(r.parts.named().iter().map(|p| num(p.1)));
            t.push(row);
        }
        plot.add(conv.name(), pts);
        for p in part_decay(&reports, &DECAY_PARTS) {
            d.push(vec![
                conv.name().to_string(),
                p.name.to_string(),
                flag(p.decreasing),
                num(p.min_factor_per_decade),
                num(p.slope),
            ]);
        }
    }
    done(vec![t, d], vec![plot])
}

fn run_sharpness(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let weight = cfg.weight()?;
    let consts = constants(cfg.dim, cfg.beta)?;
    let mut t = Table::new(
        "sharpness",
        &[
            "convention",
            "cap",
            "alpha_ratio",
            "log10_n",
            "ln_n",
            "norm",
            "max_exponent",
            "log_value",
            "value",
            "overflow",
            "verdict",
        ],
    );
    let mut plot = Plot::new("sharpness", "cap integral of the normalized sequence", "log10 n", "ln integral");
    for conv in conventions(cfg, &consts)? {
        for &ratio in &cfg.alpha_ratios {
            let table = blowup_probe(ratio, &cfg.n_list, &consts, &weight, conv, cfg.cap)?;
            let mut pts = Vec::new();
            for r in &table.rows {
                let log10_n = r.ln_n / std::f64::consts::LN_10;
                pts.push((log10_n, r.log_value));
                t.push(vec![
                    conv.name().to_string(),
                    cfg.cap.name().to_string(),
                    num(ratio),
                    num(log10_n),
                    num(r.ln_n),
                    num(r.norm),
                    num(r.max_exponent),
                    num(r.log_value),
                    opt(r.value),
                    flag(r.value.is_none()),
                    table.verdict.name().to_string(),
                ]);
            }
            plot.add(format!("{} x{}", conv.name(), ratio), pts);
        }
    }
    done(vec![t], vec![plot])
}

fn nonlinearity(cfg: &RunConfig, consts: &SobolevConstants, conv: Convention) -> Result<NonlinearitySpec, CliError> {
    Ok(match cfg.nonlinearity {
        NonlinearityKind::Power => NonlinearitySpec::subcritical(cfg.theta, cfg.lambda)?,
        NonlinearityKind::Exp => {
            let alpha0 = cfg.alpha0_ratio * consts.alpha_beta(conv)?;
            NonlinearitySpec::critical(alpha0, cfg.q, cfg.lambda, consts.gamma)?
        }
    })
}

fn kind_name(kind: NonlinearityKind) -> &'static str {
    match kind {
        NonlinearityKind::Power => "power",
        NonlinearityKind::Exp => "exp",
    }
}

fn run_solve(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let weight = cfg.weight()?;
    let consts = constants(cfg.dim, cfg.beta)?;
    let conv = conventions(cfg, &consts)?[0];
    let spec = nonlinearity(cfg, &consts, conv)?;
    let grid = Arc::new(build_grid(cfg.dim, cfg.radius, cfg.inner_count, cfg.outer_count)?);
    let opts = SolveOptions {
        knots: cfg.knots,
        tol: cfg.tol,
        max_rounds: cfg.max_rounds,
        convention: conv,
        geometry: GeometryOptions {
            seed: cfg.seed,
            ..GeometryOptions::default()
        },
        ..SolveOptions::default()
    };
    let res = mountain_pass_solve(&spec, &weight, &grid, &opts)?;

    let mut s = Table::new(
        "solve",
        &[
            "nonlinearity",
            "convention",
            "level",
            "residual",
            "ps_bound",
            "below_bound",
            "converged",
            "norm",
            "ar_gap",
            "rho",
            "ring_min",
            "t_neg",
            "iterations",
            "descent_rounds",
            "newton_steps",
        ],
    );
    let cert = &res.certificate;
    s.push(vec![
        kind_name(cfg.nonlinearity).to_string(),
        conv.name().to_string(),
        num(res.level),
        num(res.residual),
        num(res.ps_bound),
        flag(res.below_bound),
        flag(res.converged),
        num(res.norm),
        num(res.ar_gap),
        num(cert.rho),
        num(cert.ring_min),
        num(cert.t_neg),
        res.iterations.to_string(),
        res.descent_rounds.to_string(),
        res.newton_steps.to_string(),
    ]);

    let mut p = Table::new("solve_profile", &["r", "u"]);
    let nodes = res.u_star.grid().nodes();
    for (r, u) in nodes.iter().zip(res.u_star.values()) {
        p.push(vec![num(*r), num(*u)]);
    }
    let mut log = Table::new("solve_log", &["step", "before", "after"]);
    for (k, (a, b)) in res.descent_log.iter().enumerate() {
        log.push(vec![k.to_string(), num(*a), num(*b)]);
    }

    let mut plot = Plot::new("solve", "mountain-pass solution", "ln r", "u");
    plot.add(
        "u*",
        nodes.iter().zip(res.u_star.values()).map(|(r, u)| (r.ln(), *u)).collect(),
    );
    let mut trace = Plot::new("solve_log", "path maximum during descent", "step", "path maximum");
    trace.add("after", res.descent_log.iter().enumerate().map(|(k, v)| (k as f64, v.1)).collect());

    let failure = (!res.converged).then(|| {
        format!(
            "solver did not converge: residual {:e} above tol {:e} after {} rounds",
            res.residual, cfg.tol, res.descent_rounds
        )
    });
    Ok(RunOutput {
        tables: vec![s, p, log],
        plots: vec![plot, trace],
        failure,
    })
}

fn run_hypotheses(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let consts = constants(cfg.dim, cfg.beta)?;
    let conv = conventions(cfg, &consts)?[0];
    let spec = nonlinearity(cfg, &consts, conv)?;
    let rep = check_hypotheses(&spec, &consts, conv, &default_samples(cfg.t_max, cfg.samples))?;
    let mut t = Table::new("hypotheses", &["nonlinearity", "convention", "name", "pass", "margin", "note"]);
    for c in &rep.checks {
        t.push(vec![
            kind_name(cfg.nonlinearity).to_string(),
            conv.name().to_string(),
            c.name.to_string(),
            flag(c.pass),
            num(c.margin),
            c.note.clone(),
        ]);
    }
    let exact = consts.v_n * 2f64.powi(-(cfg.dim as i32));
    let denom = h5_denominator(&consts);
    let mut h = Table::new(
        "h5",
        &["N", "beta", "denominator", "v_n_over_2_pow_n", "relative_gap", "threshold", "t0", "m0", "gamma0", "envelope_c"],
    );
    let d = rep.declared;
    h.push(vec![
        cfg.dim.to_string(),
        num(cfg.beta),
        num(denom),
        num(exact),
        num(((denom - exact) / exact).abs()),
        opt(rep.h5_threshold),
        opt(d.map(|d| d.t0)),
        opt(d.map(|d| d.m0)),
        opt(d.map(|d| d.gamma0)),
        num(rep.envelope_c),
    ]);
    done(vec![t, h], Vec::new())
}

fn run_admissibility(cfg: &RunConfig) -> Result<RunOutput, CliError> {
    let weight = cfg.weight()?;
    let rep = check_chi_conditions(&weight, cfg.r_max, cfg.samples)?;
    let mut s = Table::new("admissibility_samples", &["r", "x1", "x2", "x3"]);
    for p in &rep.samples {
        s.push(vec![num(p.r), num(p.x1), num(p.x2), num(p.x3)]);
    }
    let mut m = Table::new("admissibility", &["condition", "max", "argmax", "unbounded", "pass"]);
    for (name, c) in [("x1", rep.x1), ("x2", rep.x2), ("x3", rep.x3)] {
        m.push(vec![name.to_string(), num(c.max), num(c.argmax), flag(c.unbounded), flag(c.pass)]);
    }
    m.push(vec!["all".into(), String::new(), String::new(), String::new(), flag(rep.pass)]);

    let centers = [0.0, 0.5, 1.0, 2.0, 10.0];
    let radii = [0.1, 0.5, 1.0, 5.0];
    let mut b = Table::new("muckenhoupt", &["center", "radius", "product"]);
    for p in muckenhoupt_balls(&weight, &centers, &radii)? {
        b.push(vec![num(p.center), num(p.radius), num(p.product)]);
    }

    let mut plot = Plot::new("admissibility", "tail conditions", "log10 r", "value");
    for (name, pick) in [("x1", 0usize), ("x2", 1), ("x3", 2)] {
        let pts = rep
            .samples
            .iter()
            .map(|p| (p.r.log10(), [p.x1, p.x2, p.x3][pick]))
            .collect();
        plot.add(name, pts);
    }
    done(vec![s, m, b], vec![plot])
}
