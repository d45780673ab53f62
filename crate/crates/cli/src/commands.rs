use std::path::Path;

use anyhow::{anyhow, bail, Result};
use oscillabound::cayleylab::{
    bezout_clique_data, clique_search, config_search, multivariate_reduce, periodic_coloring_verify,
    upper_density_estimate, CliqueInstance, CurveOracle,
};
use oscillabound::padic::{certified_bound_padic, echelon_reduce, mu_hat_padic_exact, padic_a0};
use oscillabound::polycore::{check_independence, compute_a0_real, format_rational, high_freq_constants};
use oscillabound::realosc::{certified_constant_real, frequency_certificate, mu_hat_real_estimate, DEFAULT_TOL};
use oscillabound::spectral::{independence_pipeline, minimize_mu_hat, Domain, MinimizationReport, MinimizeOptions};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::config::{multi_poly, FieldKind, RunConfig};

/// Rows for the CSV sidecar.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub struct Output {
    pub result: Value,
    pub csv: Option<Table>,
}

fn lambda_header(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("lambda_{i}")).collect()
}

fn samples_table(m: usize, report: &MinimizationReport) -> Table {
    let mut header = lambda_header(m);
    header.extend(["value".to_string(), "exact".to_string()]);
    Table {
        header,
        rows: report
            .samples
            .iter()
            .map(|s| {
                let mut row = s.lambda.clone();
                row.push(format!("{:e}", s.value));
                row.push(s.exact.clone().unwrap_or_default());
                row
            })
            .collect(),
    }
}

fn options(cfg: &RunConfig) -> MinimizeOptions {
    let mut o = MinimizeOptions::default();
    if let Some(b) = cfg.budget {
        o.budget = b;
    }
    if let Some(s) = cfg.seed {
        o.seed = s;
    }
    if let Some(t) = cfg.tol {
        o.tol = t;
    }
    if let Some(g) = &cfg.grid {
        o.points_per_decade = g.points_per_decade.unwrap_or(o.points_per_decade);
        o.min_exponent = g.min_exponent.unwrap_or(o.min_exponent);
        o.max_exponent = g.max_exponent.unwrap_or(o.max_exponent);
        o.cells_per_round = g.cells_per_round.unwrap_or(o.cells_per_round);
        o.rounds = g.rounds.unwrap_or(o.rounds);
        o.max_iterations = g.max_iterations.unwrap_or(o.max_iterations);
    }
    o
}

fn domain(cfg: &RunConfig) -> Result<Domain> {
    Ok(match cfg.field {
        FieldKind::Real => Domain::Real(cfg.real_window()?),
        FieldKind::Padic => Domain::Padic(cfg.padic_window()?),
    })
}

pub fn dispatch(name: &str, cfg: &RunConfig) -> Result<Output> {
    match name {
        "muhat" => muhat(cfg),
        "minimize" => minimize(cfg),
        "certify" => certify(cfg),
        "pipeline" => pipeline(cfg),
        "padic-muhat" => padic_muhat(cfg),
        "padic-certify" => padic_certify(cfg),
        "config-search" => config(cfg),
        "clique" => clique(cfg),
        "color-check" => color_check(cfg),
        "reduce" => reduce(cfg),
        other => bail!("unknown command `{other}`"),
    }
}

fn muhat(cfg: &RunConfig) -> Result<Output> {
    if cfg.field == FieldKind::Padic {
        return padic_muhat(cfg);
    }
    let family = cfg.family()?;
    let window = cfg.real_window()?;
    let tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for l in cfg.frequency_list()? {
        let lambda = l.iter().map(|x| x.float()).collect::<Result<Vec<_>>>()?;
        let m = mu_hat_real_estimate(&family, &window, &lambda, tol)?;
        let mut row: Vec<String> = lambda.iter().map(|x| format!("{x:e}")).collect();
        row.push(format!("{:e}", m.value));
        row.push(format!("{:e}", m.error));
        rows.push(row);
        values.push(json!({ "lambda": lambda, "value": m.value, "error": m.error, "panels": m.panels }));
    }
    let mut header = lambda_header(family.m());
    header.extend(["value".to_string(), "error".to_string()]);
    Ok(Output {
        result: json!({ "a0": compute_a0_real(&family), "values": values }),
        csv: Some(Table { header, rows }),
    })
}

fn minimize(cfg: &RunConfig) -> Result<Output> {
    let family = cfg.family()?;
    family.require_independent()?;
    let report = minimize_mu_hat(&family, &domain(cfg)?, &options(cfg))?;
    Ok(Output {
        csv: Some(samples_table(family.m(), &report)),
        result: serde_json::to_value(&report)?,
    })
}

fn certify(cfg: &RunConfig) -> Result<Output> {
    let family = cfg.family()?;
    family.require_independent()?;
    let bound = certified_constant_real(&family)?;
    let mut result = json!({
        "a0": compute_a0_real(&family),
        "bound": bound,
    });
    if cfg.window.is_some() {
        let window = cfg.real_window()?;
        window.validate_for(&family)?;
        result["window"] = json!(window);
        result["floor"] = json!(-bound.c / window.length());
        if let Some(l) = &cfg.lambda {
            let lambda = l.iter().map(|x| x.float()).collect::<Result<Vec<_>>>()?;
            let cert = frequency_certificate(&family, &window, &lambda)?;
            if cert.lower_bound < -bound.c / window.length() {
                return Err(oscillabound::Error::Consistency(format!(
                    "frequency certificate {} is below the uniform floor {}",
                    cert.lower_bound,
                    -bound.c / window.length()
                ))
                .into());
            }
            result["certificate"] = json!(cert);
        }
    }
    Ok(Output { result, csv: None })
}

fn pipeline(cfg: &RunConfig) -> Result<Output> {
    let family = cfg.family()?;
    let r = independence_pipeline(&family, &domain(cfg)?, &options(cfg))?;
    Ok(Output {
        csv: Some(samples_table(family.m(), &r.minimization)),
        result: serde_json::to_value(&r)?,
    })
}

fn padic_muhat(cfg: &RunConfig) -> Result<Output> {
    let family = cfg.family()?;
    let window = cfg.padic_window()?;
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for l in cfg.frequency_list()? {
        let lambda = l.iter().map(|x| x.rational()).collect::<Result<Vec<_>>>()?;
        let m = mu_hat_padic_exact(&family, &window, &lambda)?;
        let labels: Vec<String> = lambda.iter().map(format_rational).collect();
        let exact = m.exact.as_ref().map(format_rational);
        let mut row = labels.clone();
        row.push(format!("{:e}", m.value));
        row.push(exact.clone().unwrap_or_default());
        rows.push(row);
        values.push(json!({ "lambda": labels, "value": m.value, "exact": exact }));
    }
    let mut header = lambda_header(family.m());
    header.extend(["value".to_string(), "exact".to_string()]);
    Ok(Output {
        result: json!({
            "a0": padic_a0(&family, window.p),
            "normalization": format_rational(&window.normalization()),
            "values": values,
        }),
        csv: Some(Table { header, rows }),
    })
}

fn padic_certify(cfg: &RunConfig) -> Result<Output> {
    let family = cfg.family()?;
    let window = cfg.padic_window()?;
    let bound = certified_bound_padic(&family, &window)?;
    let ech = echelon_reduce(&family)?;
    Ok(Output {
        result: json!({
            "bound": bound,
            "reduced_degrees": ech.family.degrees(),
        }),
        csv: None,
    })
}

fn config(cfg: &RunConfig) -> Result<Output> {
    let family = cfg.family()?;
    let window = cfg.real_window()?;
    let set = cfg.box_set()?;
    let step = cfg.step.unwrap_or(0.01);
    let outcome = config_search(&family, &window, &set, step)?;
    let mut result = json!({ "outcome": outcome });
    if let Some(radii) = &cfg.radii {
        result["density"] = json!(upper_density_estimate(&set, radii)?);
    }
    if family.require_independent().is_ok() {
        if let Ok(c) = certified_constant_real(&family) {
            result["density_threshold"] = json!(c.c / window.length());
        }
    }
    Ok(Output { result, csv: None })
}

fn clique(cfg: &RunConfig) -> Result<Output> {
    let cc = cfg.clique.clone().ok_or_else(|| anyhow!("config needs a `clique` table"))?;
    let oracle = match &cc.implicit {
        Some(terms) => CurveOracle::implicit(multi_poly(2, terms)?)?,
        None => CurveOracle::parametrized(cfg.family()?),
    };
    let points = match (&cc.points, &oracle) {
        (Some(p), _) => p.clone(),
        (None, CurveOracle::Parametrized { family, .. }) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
            let [lo, hi] = cc.s_range;
            if !(lo < hi) {
                bail!("s_range must be increasing");
            }
            (0..cc.sample_count)
                .map(|_| {
                    let s: f64 = rng.gen_range(lo..hi);
                    family.polys().iter().map(|f| f.eval_f64(s)).collect()
                })
                .collect()
        }
        (None, CurveOracle::Implicit { .. }) => bail!("implicit curves need explicit `points`"),
    };
    let inst = CliqueInstance { points, oracle };
    let found = clique_search(&inst, cc.max_size)?;
    let mut result = json!({ "clique": found, "size": found.vertices.len() });
    if let Some(d) = &cc.degrees {
        result["bezout"] = json!(bezout_clique_data(d)?);
    }
    Ok(Output { result, csv: None })
}

fn color_check(cfg: &RunConfig) -> Result<Output> {
    let cc = cfg.coloring.clone().ok_or_else(|| anyhow!("config needs a `coloring` table"))?;
    let f = move |t: f64| {
        let two_pi_t = 2.0 * std::f64::consts::PI * t;
        let c: f64 = cc.cos.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * two_pi_t).cos()).sum();
        let s: f64 = cc.sin.iter().enumerate().map(|(k, b)| b * ((k + 1) as f64 * two_pi_t).sin()).sum();
        cc.constant + c + s
    };
    let coloring = cfg.coloring.as_ref().expect("checked above");
    let threshold = oscillabound::cayleylab::coloring_threshold(&f)?;
    let n = coloring.n.unwrap_or(threshold.min_n);
    let report = periodic_coloring_verify(&f, n, coloring.edges, cfg.seed.unwrap_or(0))?;
    if report.violations > 0 {
        return Err(oscillabound::Error::Consistency(format!(
            "{} monochromatic edges out of {} with n = {n}",
            report.violations, report.edges
        ))
        .into());
    }
    Ok(Output {
        result: json!(report),
        csv: None,
    })
}

fn reduce(cfg: &RunConfig) -> Result<Output> {
    let rc = cfg.reduce.as_ref().ok_or_else(|| anyhow!("config needs a `reduce` table"))?;
    let polys = rc
        .polys
        .iter()
        .map(|t| multi_poly(rc.nvars, t))
        .collect::<Result<Vec<_>>>()?;
    let family = multivariate_reduce(&polys)?;
    let constants = high_freq_constants(&family).ok();
    Ok(Output {
        result: json!({
            "family": family.to_strings(),
            "degrees": family.degrees(),
            "independence": check_independence(&family),
            "constants": constants,
        }),
        csv: None,
    })
}
