use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::window::Window;
use crate::error::{Error, Result};
use crate::polycore::{isolate_roots_in, lower_f64, rational_from_f64, upper_f64, ExpPoly, RationalPoly};

/// Interval carrying the witness `|Φ^{(k)}(t)| >= η` and whether `Φ'` is monotone on it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessInterval {
    pub lo: f64,
    pub hi: f64,
    pub k: u32,
    pub eta: f64,
    pub monotone: bool,
}

impl WitnessInterval {
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Disjoint intervals (up to shared endpoints), sorted by left endpoint.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IntervalDecomposition {
    pub intervals: Vec<WitnessInterval>,
}

impl IntervalDecomposition {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(WitnessInterval::length).sum()
    }

    /// Intervals where `|Φ^{(k)}| >= η` fails at one of `samples` interior points.
    pub fn witness_failures(&self, phi: &ExpPoly, samples: usize) -> Vec<usize> {
        self.intervals
            .iter()
            .enumerate()
            .filter(|(_, iv)| {
                (0..samples).any(|i| {
                    let t = iv.lo + (i as f64 + 0.5) / samples as f64 * iv.length();
                    let d = phi.derivatives_at(t, iv.k as usize)[iv.k as usize];
                    d.abs() < iv.eta * (1.0 - 1e-9)
                })
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// Output piece of [`merge_intervals`]: `[lo, hi]` lies inside interval `source` of set `set`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MergedInterval {
    pub lo: f64,
    pub hi: f64,
    pub set: usize,
    pub source: usize,
}

/// Turns a union of interval sets into disjoint pieces, each inside one input interval.
///
/// Sweeps left to right; from the current point the piece extends to the farthest right
/// endpoint among intervals covering that point. The output never has more pieces than
/// the input has intervals.
pub fn merge_intervals(sets: &[Vec<(f64, f64)>]) -> Vec<MergedInterval> {
    let mut items: Vec<(f64, f64, usize, usize)> = sets
        .iter()
        .enumerate()
        .flat_map(|(s, ivs)| ivs.iter().enumerate().map(move |(i, &(lo, hi))| (lo, hi, s, i)))
        .filter(|&(lo, hi, _, _)| lo <= hi)
        .collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));

    let mut out = Vec::new();
    let mut covered = f64::NEG_INFINITY;
    let mut p = 0;
    while p < items.len() {
        if items[p].1 <= covered {
            p += 1;
            continue;
        }
        let start = items[p].0.max(covered);
        let mut best = p;
        let mut q = p;
        while q < items.len() && items[q].0 <= start {
            if items[q].1 > items[best].1 {
                best = q;
            }
            q += 1;
        }
        let (_, hi, set, source) = items[best];
        out.push(MergedInterval {
            lo: start,
            hi,
            set,
            source,
        });
        covered = hi;
    }
    out
}

/// `Σ c_j j^k x^j`, exact.
pub(crate) fn derivative_poly(g: &RationalPoly, k: u32) -> RationalPoly {
    RationalPoly::new(
        g.coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j).pow(k)))
            .collect(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Break {
    Level,
    Cut,
}

/// Root enclosures of `p` mapped to `t = ln x`, clipped to the window.
fn breakpoints(p: &RationalPoly, window: &Window, kind: Break, out: &mut Vec<(f64, f64, Break)>) -> Result<()> {
    if p.is_zero() || p.is_constant() {
        return Ok(());
    }
    let x_lo = window.a.exp() * (1.0 - 4.0 * f64::EPSILON);
    let x_hi = window.t.exp() * (1.0 + 4.0 * f64::EPSILON);
    let width = rational_from_f64(x_lo * 1e-13)?;
    for r in isolate_roots_in(p, &rational_from_f64(x_lo)?, &rational_from_f64(x_hi)?, &width)? {
        let mut a = lower_f64(&r.lo).ln();
        let mut b = upper_f64(&r.hi).ln();
        for _ in 0..2 {
            a = a.next_down();
            b = b.next_up();
        }
        let (a, b) = (a.max(window.a), b.min(window.t));
        if a <= b {
            out.push((a, b, kind));
        }
    }
    Ok(())
}

/// `{t ∈ [a, T] : |g_k(e^t)| >= η}`, split at the roots of `cut` (the polynomial of `Φ''`).
pub(crate) fn level_set(
    gk: &RationalPoly,
    eta: f64,
    cut: &RationalPoly,
    window: &Window,
    k: u32,
) -> Result<Vec<WitnessInterval>> {
    let eta_q = rational_from_f64(eta)?;
    let mut enclosures = Vec::new();
    let shift = RationalPoly::constant(eta_q.clone());
    breakpoints(&(gk - &shift), window, Break::Level, &mut enclosures)?;
    breakpoints(&(gk + &shift), window, Break::Level, &mut enclosures)?;
    breakpoints(cut, window, Break::Cut, &mut enclosures)?;
    enclosures.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64, Break)> = Vec::new();
    for e in enclosures {
        match merged.last_mut() {
            Some(last) if e.0 <= last.1 => {
                last.1 = last.1.max(e.1);
                if e.2 == Break::Cut {
                    last.2 = Break::Cut;
                }
            }
            _ => merged.push(e),
        }
    }

    // segments between enclosures; inside each, |g_k| - η keeps one sign
    let mut segments: Vec<(f64, f64)> = Vec::new();
    let mut cursor = window.a;
    for &(lo, hi, _) in &merged {
        segments.push((cursor, lo.max(cursor)));
        cursor = cursor.max(hi);
    }
    segments.push((cursor, window.t.max(cursor)));

    let inside: Vec<bool> = segments
        .iter()
        .map(|&(lo, hi)| {
            if hi <= lo {
                return false;
            }
            let x = rational_from_f64((0.5 * (lo + hi)).exp()).expect("finite");
            gk.eval(&x).abs() >= eta_q
        })
        .collect();

    let mut out: Vec<WitnessInterval> = Vec::new();
    let mut open: Option<f64> = None;
    for (i, &(lo, hi)) in segments.iter().enumerate() {
        if !inside[i] {
            continue;
        }
        let start = open.take().unwrap_or(lo);
        let next_inside = i + 1 < segments.len() && inside[i + 1];
        if next_inside {
            let (elo, ehi, kind) = merged[i];
            match kind {
                // tangency of |g_k| with η: the set continues through
                Break::Level => {
                    open = Some(start);
                    continue;
                }
                Break::Cut => {
                    let mid = 0.5 * (elo + ehi);
                    out.push(WitnessInterval { lo: start, hi: mid, k, eta, monotone: true });
                    open = Some(mid);
                    continue;
                }
            }
        }
        out.push(WitnessInterval { lo: start, hi, k, eta, monotone: true });
    }
    Ok(out)
}

/// Splits `{t ∈ [a, T] : |Φ(t)| >= M}` into at most `3n` intervals on which `Φ'` is monotone.
///
/// Breakpoints are the roots of `g ∓ M` and of the polynomial of `Φ''`, where
/// `Φ(t) = g(e^t)`. Each interval carries the witness `k = 0, η = M`.
pub fn superlevel_decompose(phi: &ExpPoly, m: f64, window: &Window) -> Result<IntervalDecomposition> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidArgument(format!("level must be positive, got {m}")));
    }
    let g = phi.base_poly()?;
    let n = g.degree().unwrap_or(0);
    if n == 0 {
        return Err(Error::InvalidArgument("phase must be non-constant".into()));
    }
    window.check_range(n as u32)?;
    let cut = derivative_poly(&g, 2);
    let intervals = level_set(&g, m, &cut, window, 0)?;
    if intervals.len() > 3 * n {
        return Err(Error::Consistency(format!(
            "superlevel decomposition produced {} > 3n = {} intervals",
            intervals.len(),
            3 * n
        )));
    }
    Ok(IntervalDecomposition { intervals })
}

/// Intersection of two sorted disjoint interval lists; witnesses come from `cover`.
pub(crate) fn intersect(base: &[WitnessInterval], cover: &[WitnessInterval]) -> Vec<WitnessInterval> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < base.len() && j < cover.len() {
        let lo = base[i].lo.max(cover[j].lo);
        let hi = base[i].hi.min(cover[j].hi);
        if lo < hi {
            out.push(WitnessInterval {
                lo,
                hi,
                monotone: base[i].monotone && cover[j].monotone,
                ..cover[j]
            });
        }
        if base[i].hi < cover[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_above_one() {
        let w = Window::new(1.0, 2.0).unwrap();
        let d = superlevel_decompose(&ExpPoly::new([(1, 1.0)]), 1.0, &w).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d.intervals[0].lo, d.intervals[0].hi), (1.0, 2.0));
        assert_eq!(d.intervals[0].k, 0);
        let d = superlevel_decompose(&ExpPoly::new([(1, 1.0)]), 3f64.exp(), &w).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn quadratic_level_set() {
        // g = x^2 - 3x on x ∈ [1, e^2], M = 1/2
        let phi = ExpPoly::new([(2, 1.0), (1, -3.0)]);
        let w = Window::new(0.0, 2.0).unwrap();
        let d = superlevel_decompose(&phi, 0.5, &w).unwrap();
        assert!(d.len() <= 6);
        assert!(d.witness_failures(&phi, 32).is_empty());
        // |g| < 1/2 exactly between the roots of g = ±1/2 near 3 and near... check a gap point
        let x1 = (3.0 + (9.0f64 + 2.0).sqrt()) / 2.0; // g = 1/2
        let x0 = (3.0 + (9.0f64 - 2.0).sqrt()) / 2.0; // g = -1/2
        let covered = |t: f64| d.intervals.iter().any(|iv| iv.lo <= t && t <= iv.hi);
        assert!(!covered(0.5 * (x0.ln() + x1.ln())));
        assert!(covered(0.1) && covered(1.9));
        // Φ'' root at x = 3/4 lies outside [1, e^2]; minimum of g at x = 3/2 splits nothing
        let total: f64 = d.total_length();
        assert!((total - (2.0 - (x1.ln() - x0.ln()))).abs() < 1e-9);
    }

    #[test]
    fn merge_example() {
        let out = merge_intervals(&[vec![(0.0, 1.0), (2.0, 3.0)], vec![(0.5, 2.5)]]);
        let spans: Vec<_> = out.iter().map(|m| (m.lo, m.hi, m.set)).collect();
        assert_eq!(spans, vec![(0.0, 1.0, 0), (1.0, 2.5, 1), (2.5, 3.0, 0)]);
    }

    #[test]
    fn merge_identity_and_disjoint() {
        let one = merge_intervals(&[vec![(0.0, 1.0), (2.0, 3.0)]]);
        assert_eq!(one.len(), 2);
        let two = merge_intervals(&[vec![(0.0, 1.0)], vec![(2.0, 3.0)]]);
        let spans: Vec<_> = two.iter().map(|m| (m.lo, m.hi, m.set)).collect();
        assert_eq!(spans, vec![(0.0, 1.0, 0), (2.0, 3.0, 1)]);
    }

    #[test]
    fn derivative_poly_is_exact() {
        let g = RationalPoly::from_i64(&[5, 1, 1]);
        assert_eq!(derivative_poly(&g, 2), RationalPoly::from_i64(&[0, 1, 4]));
    }
}
