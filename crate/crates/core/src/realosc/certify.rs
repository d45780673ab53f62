use std::f64::consts::PI;

use serde::Serialize;

use super::decompose::{derivative_poly, intersect, level_set, merge_intervals, superlevel_decompose, IntervalDecomposition, WitnessInterval};
use super::window::Window;
use crate::error::{Error, Result};
use crate::polycore::{constant_pairing, high_freq_constants, phi_from_frequency, CurveFamily, ExpPoly, HighFreqConstants};

/// Which half of the case split `|Σ λ_i f_i(0)| <= 1/8` a frequency falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrequencyCase {
    Low,
    High,
}

/// van der Corput: `|∫ e^{iψ}| <= 12k / η^{1/k}` when `|ψ^{(k)}| >= η` (and `ψ'` monotone for `k = 1`).
pub fn vdc_bound(k: u32, eta: f64) -> f64 {
    assert!(k >= 1, "van der Corput needs k >= 1");
    assert!(eta > 0.0, "van der Corput needs eta > 0");
    12.0 * k as f64 / eta.powf(1.0 / k as f64)
}

/// Rounded-up [`vdc_bound`], for certificates.
fn vdc_upper(k: u32, eta: f64) -> f64 {
    vdc_bound(k, eta).next_up().next_up()
}

pub fn classify_frequency(family: &CurveFamily, lambda: &[f64]) -> Result<FrequencyCase> {
    if lambda.len() != family.m() {
        return Err(Error::DimensionMismatch {
            expected: family.m(),
            got: lambda.len(),
        });
    }
    if lambda.iter().all(|&l| l == 0.0) {
        return Err(Error::InvalidArgument(
            "λ = 0 has no case split; μ̂(0) = 1".into(),
        ));
    }
    Ok(if constant_pairing(family, lambda).abs() <= 0.125 {
        FrequencyCase::Low
    } else {
        FrequencyCase::High
    })
}

/// Interval budget `κ = 3n · 2(3n)^4`.
pub fn interval_budget(n: usize) -> u64 {
    let three_n = 3 * n as u64;
    three_n * 2 * three_n.pow(4)
}

/// One side of the case split in [`CertifiedBound`].
#[derive(Clone, Debug, Serialize)]
pub struct CaseBreakdown {
    pub interval_budget: u64,
    /// Lower bound on `max_k |Φ^{(k)}|` in this case.
    pub eta: f64,
    /// `vdc_bound(k, 2πη)` for `k = 1..n`.
    pub per_k: Vec<f64>,
    pub per_interval: f64,
    pub total: f64,
}

impl CaseBreakdown {
    fn new(n: usize, eta: f64) -> Self {
        let psi_eta = (2.0 * PI * eta).next_down();
        let per_k: Vec<f64> = (1..=n as u32).map(|k| vdc_upper(k, psi_eta)).collect();
        let per_interval = per_k.iter().copied().fold(0.0, f64::max);
        let budget = interval_budget(n);
        Self {
            interval_budget: budget,
            eta,
            per_k,
            per_interval,
            total: (budget as f64 * per_interval).next_up(),
        }
    }
}

/// The constant `C` with `μ̂_T(λ) >= -C/(T - a)` for every `λ` and every `T > a > a_0`.
#[derive(Clone, Debug, Serialize)]
pub struct CertifiedBound {
    pub c: f64,
    pub n: usize,
    pub low: CaseBreakdown,
    /// `None` when every `f_i(0) = 0`, so the high-frequency case never occurs.
    pub high: Option<CaseBreakdown>,
    pub constants: HighFreqConstants,
}

fn low_eta(constants: &HighFreqConstants) -> f64 {
    (1.0 / (8.0 * constants.h * constants.n as f64).next_up()).next_down()
}

fn high_eta(constants: &HighFreqConstants, epsilon: f64) -> f64 {
    (epsilon / (constants.n as f64 * constants.h_prime).next_up()).next_down()
}

pub fn certified_constant_real(family: &CurveFamily) -> Result<CertifiedBound> {
    let constants = high_freq_constants(family)?;
    let n = family.n();
    let low = CaseBreakdown::new(n, low_eta(&constants));
    let high = constants
        .epsilon
        .map(|eps| CaseBreakdown::new(n, high_eta(&constants, eps)));
    let c = high
        .as_ref()
        .map_or(low.total, |h| h.total.max(low.total));
    Ok(CertifiedBound {
        c,
        n,
        low,
        high,
        constants,
    })
}

/// Per-frequency certificate: the decomposition the proof uses for this `λ`.
#[derive(Clone, Debug, Serialize)]
pub struct FrequencyCertificate {
    pub case: FrequencyCase,
    pub eta: f64,
    /// Pieces of the set where oscillation is used, each with its witness `(k, η)`.
    pub decomposition: IntervalDecomposition,
    /// Low case: the set `J = {|Φ| < 1/4}` where `cos(2πΦ) > 0`.
    pub positive_part: Vec<(f64, f64)>,
    /// `Σ vdc_bound(k, 2πη)` over the decomposition.
    pub vdc_sum: f64,
    /// Length of the oscillatory set left uncovered by root-isolation slivers.
    pub uncovered: f64,
    /// `-(vdc_sum + uncovered) / (T - a)`.
    pub lower_bound: f64,
    pub interval_budget: u64,
}

fn derivative_cover(g_phi: &ExpPoly, eta: f64, window: &Window, n: usize) -> Result<Vec<WitnessInterval>> {
    let g = g_phi.base_poly()?;
    let cut = derivative_poly(&g, 2);
    let sets: Vec<Vec<WitnessInterval>> = (1..=n as u32)
        .map(|k| level_set(&derivative_poly(&g, k), eta, &cut, window, k))
        .collect::<Result<_>>()?;
    let plain: Vec<Vec<(f64, f64)>> = sets
        .iter()
        .map(|s| s.iter().map(|iv| (iv.lo, iv.hi)).collect())
        .collect();
    Ok(merge_intervals(&plain)
        .into_iter()
        .map(|m| WitnessInterval {
            lo: m.lo,
            hi: m.hi,
            ..sets[m.set][m.source]
        })
        .collect())
}

fn complement(pieces: &[WitnessInterval], window: &Window) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut cursor = window.a;
    for iv in pieces {
        if iv.lo > cursor {
            out.push((cursor, iv.lo));
        }
        cursor = cursor.max(iv.hi);
    }
    if cursor < window.t {
        out.push((cursor, window.t));
    }
    out
}

/// Builds the case-split decomposition for one `λ` and the lower bound it certifies.
pub fn frequency_certificate(family: &CurveFamily, window: &Window, lambda: &[f64]) -> Result<FrequencyCertificate> {
    window.validate_for(family)?;
    let case = classify_frequency(family, lambda)?;
    let phi = phi_from_frequency(family, lambda)?;
    if phi.is_constant() {
        return Err(Error::InvalidArgument("phase is constant for this λ".into()));
    }
    let constants = high_freq_constants(family)?;
    let n = family.n();
    let (eta, target, positive_part) = match case {
        FrequencyCase::Low => {
            let s = superlevel_decompose(&phi, 0.25, window)?;
            let j = complement(&s.intervals, window);
            (low_eta(&constants), s.intervals, j)
        }
        FrequencyCase::High => {
            let eps = constants.epsilon.ok_or_else(|| {
                Error::Consistency("high-frequency λ with L = 0".into())
            })?;
            let whole = WitnessInterval {
                lo: window.a,
                hi: window.t,
                k: 0,
                eta: 0.0,
                monotone: true,
            };
            (high_eta(&constants, eps), vec![whole], Vec::new())
        }
    };
    let cover = derivative_cover(&phi, eta, window, n)?;
    let pieces = intersect(&target, &cover);
    let target_len: f64 = target.iter().map(WitnessInterval::length).sum();
    let covered: f64 = pieces.iter().map(WitnessInterval::length).sum();
    let uncovered = (target_len - covered).max(0.0);
    let psi_eta = (2.0 * PI * eta).next_down();
    let vdc_sum: f64 = pieces.iter().map(|iv| vdc_upper(iv.k, psi_eta)).sum();
    let budget = interval_budget(n);
    if pieces.len() as u64 > budget {
        return Err(Error::Consistency(format!(
            "{} intervals exceed the budget {budget}",
            pieces.len()
        )));
    }
    Ok(FrequencyCertificate {
        case,
        eta,
        decomposition: IntervalDecomposition { intervals: pieces },
        positive_part,
        vdc_sum,
        uncovered,
        lower_bound: -(vdc_sum + uncovered) / window.length(),
        interval_budget: budget,
    })
}
