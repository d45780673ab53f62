//! Numerical search for `inf_λ μ̂_T(λ)`.
//!
//! Every search is a fixed stream of evaluations where each step depends only on
//! earlier results. A budget truncates the stream, so the best value can only improve as
//! the budget grows.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{lambda_lattice, mu_hat_padic_exact, PadicWindow};
use crate::polycore::{format_rational, CurveFamily};
use crate::realosc::{mu_hat_real_estimate, Window};

/// Where `μ̂_T` lives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Domain {
    Real(Window),
    Padic(PadicWindow),
}

/// Tuning knobs for [`minimize_mu_hat`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MinimizeOptions {
    /// Maximal number of `μ̂` evaluations.
    pub budget: usize,
    pub seed: u64,
    /// Quadrature tolerance for the real case.
    pub tol: f64,
    pub points_per_decade: usize,
    pub min_exponent: i32,
    pub max_exponent: i32,
    /// Grid cells sampled per round before refining.
    pub cells_per_round: usize,
    pub rounds: usize,
    pub max_iterations: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            budget: 20_000,
            seed: 0,
            tol: 1e-8,
            points_per_decade: 17,
            min_exponent: -6,
            max_exponent: 6,
            cells_per_round: 512,
            rounds: 8,
            max_iterations: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    /// Values per axis: `0` and `±10^e` for log-spaced `e`.
    pub axis_len: usize,
    pub min_exponent: i32,
    pub max_exponent: i32,
    pub points_per_decade: usize,
    /// Total number of cells, as a float because it may exceed `u64`.
    pub cells: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub stage: String,
    pub lambda: Vec<String>,
    pub value: f64,
}

/// One evaluated frequency, for CSV export.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub lambda: Vec<String>,
    pub value: f64,
    pub exact: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimizationReport {
    pub best_lambda: Vec<String>,
    pub best_value: f64,
    /// Exact value when the minimiser is rational (p-adic case).
    pub best_exact: Option<String>,
    /// Quadrature error bound at the minimiser (0 in the p-adic case).
    pub best_error: f64,
    pub grid: Option<GridSpec>,
    /// Improvements of the running minimum, in order.
    pub trace: Vec<TraceEntry>,
    pub evaluations: usize,
    /// Evaluations that failed (quadrature non-convergence) and were skipped.
    pub failures: usize,
    /// The budget stopped the search before its natural end.
    pub partial: bool,
    #[serde(skip)]
    pub samples: Vec<Sample>,
}

impl MinimizationReport {
    fn new(grid: Option<GridSpec>) -> Self {
        Self {
            best_lambda: Vec::new(),
            best_value: f64::INFINITY,
            best_exact: None,
            best_error: 0.0,
            grid,
            trace: Vec::new(),
            evaluations: 0,
            failures: 0,
            partial: false,
            samples: Vec::new(),
        }
    }

    fn record(&mut self, stage: &str, lambda: Vec<String>, value: f64, error: f64, exact: Option<String>) {
        self.evaluations += 1;
        self.samples.push(Sample {
            lambda: lambda.clone(),
            value,
            exact: exact.clone(),
        });
        if value < self.best_value {
            self.best_value = value;
            self.best_lambda = lambda.clone();
            self.best_exact = exact;
            self.best_error = error;
            self.trace.push(TraceEntry {
                stage: stage.to_string(),
                lambda,
                value,
            });
        }
    }
}

pub fn minimize_mu_hat(family: &CurveFamily, domain: &Domain, options: &MinimizeOptions) -> Result<MinimizationReport> {
    if options.budget == 0 {
        return Err(Error::InvalidArgument("budget must be at least one evaluation".into()));
    }
    match domain {
        Domain::Real(w) => minimize_real(family, w, options),
        Domain::Padic(w) => minimize_padic(family, w, options.budget),
    }
}

fn axis_values(o: &MinimizeOptions) -> Vec<f64> {
    let steps = (o.max_exponent - o.min_exponent) as usize * o.points_per_decade;
    let mut out = vec![0.0];
    for i in 0..=steps {
        let e = o.min_exponent as f64 + i as f64 / o.points_per_decade as f64;
        let x = 10f64.powf(e);
        out.push(x);
        out.push(-x);
    }
    out
}

fn fmt_lambda(l: &[f64]) -> Vec<String> {
    l.iter().map(|x| format!("{x:e}")).collect()
}

struct RealSearch<'a> {
    family: &'a CurveFamily,
    window: &'a Window,
    tol: f64,
    budget: usize,
    report: MinimizationReport,
}

impl RealSearch<'_> {
    fn remaining(&self) -> usize {
        self.budget - self.report.evaluations - self.report.failures
    }

    /// Evaluates a batch (truncated to the remaining budget); returns the values in order.
    fn eval(&mut self, stage: &str, batch: &[Vec<f64>]) -> Vec<Option<f64>> {
        let take = batch.len().min(self.remaining());
        if take < batch.len() {
            self.report.partial = true;
        }
        let results: Vec<_> = batch[..take]
            .par_iter()
            .map(|l| mu_hat_real_estimate(self.family, self.window, l, self.tol))
            .collect();
        results
            .into_iter()
            .zip(batch)
            .map(|(r, l)| match r {
                Ok(m) => {
                    self.report.record(stage, fmt_lambda(l), m.value, m.error, None);
                    Some(m.value)
                }
                Err(_) => {
                    self.report.failures += 1;
                    None
                }
            })
            .collect()
    }

    /// Compass search with relative steps, from `start` with value `value`.
    fn refine(&mut self, mut x: Vec<f64>, mut value: f64, max_iterations: usize) {
        let mut step = 0.5;
        for _ in 0..max_iterations {
            if step < 1e-7 || self.remaining() == 0 {
                break;
            }
            let mut batch = Vec::with_capacity(2 * x.len());
            for i in 0..x.len() {
                let scale = x[i].abs().max(1e-6);
                for sign in [1.0, -1.0] {
                    let mut y = x.clone();
                    y[i] += sign * step * scale;
                    batch.push(y);
                }
            }
            let vals = self.eval("refine", &batch);
            let best = vals
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|v| (i, v)))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((i, v)) if v < value => {
                    x = batch[i].clone();
                    value = v;
                }
                _ => step *= 0.5,
            }
        }
    }
}

fn minimize_real(family: &CurveFamily, window: &Window, o: &MinimizeOptions) -> Result<MinimizationReport> {
    window.validate_for(family)?;
    if !(o.tol > 0.0) || o.points_per_decade == 0 || o.max_exponent <= o.min_exponent {
        return Err(Error::InvalidArgument("bad grid or tolerance".into()));
    }
    let axis = axis_values(o);
    let m = family.m();
    let grid = GridSpec {
        axis_len: axis.len(),
        min_exponent: o.min_exponent,
        max_exponent: o.max_exponent,
        points_per_decade: o.points_per_decade,
        cells: (axis.len() as f64).powi(m as i32),
    };
    let mut search = RealSearch {
        family,
        window,
        tol: o.tol,
        budget: o.budget,
        report: MinimizationReport::new(Some(grid)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    for _ in 0..o.rounds {
        let cells: Vec<Vec<f64>> = (0..o.cells_per_round)
            .map(|_| loop {
                let l: Vec<f64> = (0..m).map(|_| axis[rng.gen_range(0..axis.len())]).collect();
                if l.iter().any(|&x| x != 0.0) {
                    break l;
                }
            })
            .collect();
        let vals = search.eval("grid", &cells);
        let start = vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((i, v)) = start {
            search.refine(cells[i].clone(), v, o.max_iterations);
        }
        if search.remaining() == 0 {
            search.report.partial = true;
            break;
        }
    }
    Ok(search.report)
}

fn minimize_padic(family: &CurveFamily, window: &PadicWindow, budget: usize) -> Result<MinimizationReport> {
    window.validate_for(family)?;
    let lattice: Vec<Vec<BigRational>> = lambda_lattice(window.p, family.m())
        .into_iter()
        .filter(|l| l.iter().any(|x| *x != BigRational::from_integer(0.into())))
        .collect();
    let mut report = MinimizationReport::new(None);
    let take = lattice.len().min(budget);
    report.partial = take < lattice.len();
    let results: Vec<_> = lattice[..take]
        .par_iter()
        .map(|l| mu_hat_padic_exact(family, window, l))
        .collect();
    for (l, r) in lattice.iter().zip(results) {
        let v = r?;
        let labels = l.iter().map(format_rational).collect();
        report.record("lattice", labels, v.value, 0.0, v.exact.as_ref().map(format_rational));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parabola() -> CurveFamily {
        CurveFamily::from_i64(&[&[0, 1], &[0, 0, 1]]).unwrap()
    }

    #[test]
    fn axis_shape() {
        let o = MinimizeOptions::default();
        let a = axis_values(&o);
        assert_eq!(a.len(), 1 + 2 * (12 * 17 + 1));
        assert!((a[1] - 1e-6).abs() < 1e-20);
        assert!((a[a.len() - 2] - 1e6).abs() < 1e-6);
    }

    #[test]
    fn real_search_finds_negative_value() {
        let o = MinimizeOptions {
            budget: 1500,
            cells_per_round: 200,
            rounds: 3,
            ..Default::default()
        };
        let w = Window::new(1.0, 2.0).unwrap();
        let r = minimize_mu_hat(&parabola(), &Domain::Real(w), &o).unwrap();
        assert!(r.best_value < 0.0);
        assert!(r.samples.iter().all(|s| s.value <= 1.0 && s.value >= r.best_value));
        assert!(r.evaluations + r.failures <= 1500);
    }

    #[test]
    fn best_value_is_monotone_in_budget() {
        let w = Window::new(1.0, 2.0).unwrap();
        let mut last = f64::INFINITY;
        for budget in [10, 60, 300, 700] {
            let o = MinimizeOptions {
                budget,
                cells_per_round: 100,
                rounds: 4,
                max_iterations: 40,
                ..Default::default()
            };
            let r = minimize_mu_hat(&parabola(), &Domain::Real(w), &o).unwrap();
            assert!(r.best_value <= last);
            last = r.best_value;
        }
    }

    #[test]
    fn padic_lattice_respects_floor() {
        let w = PadicWindow::new(3, 1, 2).unwrap();
        let r = minimize_mu_hat(&parabola(), &Domain::Padic(w), &MinimizeOptions::default()).unwrap();
        assert_eq!(r.evaluations, 55 * 55 - 1);
        assert!(!r.partial);
        assert!(r.best_value >= -72.0 && r.best_value < 0.0);
        let small = MinimizeOptions {
            budget: 5,
            ..Default::default()
        };
        let r = minimize_mu_hat(&parabola(), &Domain::Padic(w), &small).unwrap();
        assert!(r.partial && r.evaluations == 5);
    }

    #[test]
    fn zero_budget_rejected() {
        let o = MinimizeOptions {
            budget: 0,
            ..Default::default()
        };
        let w = Window::new(1.0, 2.0).unwrap();
        assert!(minimize_mu_hat(&parabola(), &Domain::Real(w), &o).is_err());
    }
}
