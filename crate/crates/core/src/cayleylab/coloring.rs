use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Samples per unit period when estimating `sup |f|` and `(ε, δ)`.
const SAMPLES: usize = 20_000;

/// `(⌊nx⌋ mod n, ⌊ny⌋ mod n²)`.
pub fn periodic_color(x: f64, y: f64, n: u64) -> (u64, u64) {
    let n_f = n as f64;
    let a = (n_f * x).floor().rem_euclid(n_f) as u64;
    let b = (n_f * y).floor().rem_euclid(n_f * n_f) as u64;
    (a, b)
}

/// Sampled constants for a period-1 function with `f(0) ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ColoringThreshold {
    /// Upper estimate of `sup |f|`.
    pub m: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Smallest admissible `n`: the least integer above `max(M + 2, 1/ε, 1/δ)`.
    pub min_n: u64,
}

pub fn coloring_threshold(f: &(dyn Fn(f64) -> f64 + Sync)) -> Result<ColoringThreshold> {
    let f0 = f(0.0);
    if !f0.is_finite() || f0 == 0.0 {
        return Err(Error::Hypothesis("need f(0) ≠ 0".into()));
    }
    let grid: Vec<f64> = (0..SAMPLES).map(|i| f(i as f64 / SAMPLES as f64)).collect();
    let sup = grid.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if !sup.is_finite() {
        return Err(Error::Hypothesis("f must be bounded".into()));
    }
    // sampled sup with a margin for what the grid misses
    let m = sup * 1.01 + 1e-9;
    let epsilon = f0.abs() / 2.0;
    // largest δ = 2^-k with |f| > 1.1 ε on the sampled [-δ, δ]
    let mut delta = 0.5;
    loop {
        let steps = (delta * SAMPLES as f64).ceil() as usize;
        let ok = (0..=steps).all(|i| {
            let x = delta * i as f64 / steps.max(1) as f64;
            f(x).abs() > 1.1 * epsilon && f(-x).abs() > 1.1 * epsilon
        });
        if ok {
            break;
        }
        delta /= 2.0;
        if delta < 1e-6 {
            return Err(Error::Hypothesis("no δ found for f near 0".into()));
        }
    }
    let bound = (m + 2.0).max(1.0 / epsilon).max(1.0 / delta);
    Ok(ColoringThreshold {
        m,
        epsilon,
        delta,
        min_n: bound.floor() as u64 + 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ColoringReport {
    pub n: u64,
    pub edges: usize,
    pub violations: usize,
    pub threshold: ColoringThreshold,
}

/// Colors both ends of random edges `x ~ x ± (t, f(t))` and counts monochromatic ones.
pub fn periodic_coloring_verify(
    f: &(dyn Fn(f64) -> f64 + Sync),
    n: u64,
    edge_samples: usize,
    seed: u64,
) -> Result<ColoringReport> {
    let threshold = coloring_threshold(f)?;
    if n < threshold.min_n {
        return Err(Error::InvalidArgument(format!(
            "n = {n} is below the threshold {}",
            threshold.min_n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    for _ in 0..edge_samples {
        let x = rng.gen_range(-100.0..100.0);
        let y = rng.gen_range(-100.0..100.0);
        let t: f64 = rng.gen_range(-100.0..100.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (x2, y2) = (x + sign * t, y + sign * f(t));
        if periodic_color(x, y, n) == periodic_color(x2, y2, n) {
            violations += 1;
        }
    }
    Ok(ColoringReport {
        n,
        edges: edge_samples,
        violations,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn color_examples() {
        assert_eq!(periodic_color(0.0, 0.0, 5), (0, 0));
        assert_eq!(periodic_color(-0.1, 0.0, 5).0, 4);
        assert_eq!(periodic_color(1.0, 5.0, 5), (0, 0));
    }

    #[test]
    fn cosine_threshold_and_properness() {
        let f = |t: f64| 2.0 + (2.0 * PI * t).cos();
        let th = coloring_threshold(&f).unwrap();
        assert_eq!(th.min_n, 6);
        assert!(periodic_coloring_verify(&f, 5, 10, 0).is_err());
        let r = periodic_coloring_verify(&f, 6, 20_000, 1).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn small_n_can_fail() {
        // below the threshold the coloring is not proper in general
        let f = |t: f64| 2.0 + (2.0 * PI * t).cos();
        let n = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bad = (0..20_000)
            .filter(|_| {
                let (x, y, t) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
                periodic_color(x, y, n) == periodic_color(x + t, y + f(t), n)
            })
            .count();
        assert!(bad > 0);
    }

    #[test]
    fn vanishing_at_zero_rejected() {
        let f = |t: f64| (2.0 * PI * t).sin();
        assert!(coloring_threshold(&f).is_err());
    }
}
