//! Adaptive quadrature of `∫ e^{2πiΦ(t)} dt` for exponential-polynomial phases.
//!
//! The window is first cut at the stationary points of `Φ` (positive roots of `g'`
//! isolated by Sturm sequences), so `Φ` is strictly monotone on every piece. Each
//! panel is then estimated three ways and the estimate with the smallest error wins:
//!
//! * Gauss–Kronrod 7/15, allowed only while `2π|ΔΦ| <= π` across the panel;
//! * a three-term integration-by-parts expansion with an a posteriori bound on the
//!   remainder integral, accurate where `|Φ'|` is large;
//! * the trivial bound `|∫| <= q - p`.
//!
//! Every node carries a bound on the rounding error of `Φ`, which is propagated into
//! the phase, so even phases around `1e60` produce honest error estimates.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::window::Window;
use crate::error::{Error, Result};
use crate::polycore::{
    isolate_roots_in, lower_f64, phi_from_frequency, rational_from_f64, upper_f64, CurveFamily,
    ExpPoly,
};

/// Default absolute tolerance for `μ̂`.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Panel cap after which the quadrature gives up.
pub const MAX_PANELS: usize = 200_000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of [`oscillatory_integral`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscIntegral {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// `μ̂_T(λ)` with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MuHat {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Values of `Φ, Φ', ..., Φ''''` at one point plus a rounding bound on `Φ`.
#[derive(Clone, Copy, Debug)]
struct Node {
    d: [f64; 5],
    phi_err: f64,
}

impl Node {
    fn cis(&self) -> Complex64 {
        Complex64::cis(2.0 * PI * self.d[0].fract())
    }

    /// Bound on `|e^{iψ_computed} - e^{iψ_true}|`.
    fn phase_err(&self) -> f64 {
        (2.0 * PI * self.phi_err).min(2.0) + 4.0 * f64::EPSILON
    }
}

struct Phase {
    terms: Vec<(u32, f64)>,
}

impl Phase {
    fn new(phi: &ExpPoly) -> Self {
        Self {
            terms: phi.terms().iter().map(|(&j, &c)| (j, c)).collect(),
        }
    }

    fn node(&self, t: f64) -> Node {
        let x = t.exp();
        let nterms = self.terms.len() as f64;
        let mut d = [0.0; 5];
        let mut abs_sum = 0.0;
        for &(j, c) in &self.terms {
            let term = if j == 0 { c } else { c * x.powi(j as i32) };
            // exp contributes j ulps through the power, powi and the product a few more
            abs_sum += term.abs() * (4.0 * j as f64 + 4.0 + nterms);
            let jf = j as f64;
            let mut v = term;
            for slot in d.iter_mut() {
                *slot += v;
                v *= jf;
            }
        }
        Node {
            d,
            phi_err: abs_sum * f64::EPSILON,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
    /// Part of `error` due to rounding of `Φ`, which subdivision cannot remove.
    rounding: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn boundary(n: &Node) -> Option<(Complex64, f64)> {
    let d1 = n.d[1];
    if d1 == 0.0 {
        return None;
    }
    let v = 1.0 / (2.0 * PI * d1);
    let r2 = n.d[2] / d1;
    let r3 = n.d[3] / d1;
    let t3 = v * v * v * (3.0 * r2 * r2 - r3);
    let bracket = Complex64::new(-r2 * v * v, -v + t3);
    let mag = v.abs() + (r2 * v * v).abs() + t3.abs();
    let b = n.cis() * bracket;
    let err = mag * n.phase_err() + 1e-14 * mag;
    (b.re.is_finite() && b.im.is_finite() && err.is_finite()).then_some((b, err))
}

fn remainder_density(n: &Node) -> f64 {
    let d1 = n.d[1];
    let v = 1.0 / (2.0 * PI * d1);
    let r2 = n.d[2] / d1;
    let r3 = n.d[3] / d1;
    let r4 = n.d[4] / d1;
    (v * v * v).abs() * (r4 - 10.0 * r2 * r3 + 15.0 * r2 * r2 * r2).abs()
}

fn eval_panel(phase: &Phase, lo: f64, hi: f64) -> Panel {
    let half = 0.5 * (hi - lo);
    let center = 0.5 * (hi + lo);
    let mut nodes = [Node { d: [0.0; 5], phi_err: 0.0 }; 15];
    for i in 0..7 {
        nodes[i] = phase.node(center - half * XGK[i]);
        nodes[14 - i] = phase.node(center + half * XGK[i]);
    }
    nodes[7] = phase.node(center);
    let weight = |i: usize| WGK[if i <= 7 { i } else { 14 - i }];
    let gauss_weight = |i: usize| {
        let k = if i <= 7 { i } else { 14 - i };
        (k % 2 == 1).then(|| WG[k / 2])
    };

    // below the trivial bound, rounding costs at least the GK floor or two boundary terms
    let c = &nodes[7];
    let mut best = Panel {
        lo,
        hi,
        value: Complex64::new(0.0, 0.0),
        error: hi - lo,
        rounding: ((hi - lo) * (0.5 * c.phase_err()).min(1.0)).min(c.phase_err() / (PI * c.d[1].abs())),
    };

    // Gauss–Kronrod on e^{iψ}
    let end_lo = phase.node(lo);
    let end_hi = phase.node(hi);
    if (end_hi.d[0] - end_lo.d[0]).abs() <= 0.5 {
        let mut k = Complex64::new(0.0, 0.0);
        let mut g = Complex64::new(0.0, 0.0);
        let mut rounding = 0.0;
        for (i, n) in nodes.iter().enumerate() {
            let e = n.cis();
            k += e * weight(i);
            if let Some(w) = gauss_weight(i) {
                g += e * w;
            }
            rounding += weight(i) * n.phase_err();
        }
        let value = k * half;
        let error = ((k - g) * half).norm() + rounding * half;
        if error < best.error {
            best = Panel {
                lo,
                hi,
                value,
                error,
                rounding: rounding * half,
            };
        }
    }

    // integration by parts, only when Φ' keeps one sign on the panel
    let sign = end_lo.d[1].signum();
    let same_sign = sign != 0.0
        && end_hi.d[1].signum() == sign
        && nodes.iter().all(|n| n.d[1].signum() == sign);
    if same_sign {
        if let (Some((b_lo, e_lo)), Some((b_hi, e_hi))) = (boundary(&end_lo), boundary(&end_hi)) {
            let mut rk = 0.0;
            let mut rg = 0.0;
            for (i, n) in nodes.iter().enumerate() {
                let h = remainder_density(n);
                rk += weight(i) * h;
                if let Some(w) = gauss_weight(i) {
                    rg += w * h;
                }
            }
            let rem = (rk + (rk - rg).abs()) * half;
            let error = rem + e_lo + e_hi;
            if error.is_finite() && error < best.error {
                best = Panel {
                    lo,
                    hi,
                    value: b_hi - b_lo,
                    error,
                    rounding: e_lo + e_hi,
                };
            }
        }
    }
    best
}

/// Stationary-point enclosures of `Φ` in `[lo, hi]`, as `t`-intervals.
fn stationary_gaps(phi: &ExpPoly, lo: f64, hi: f64, width_t: f64) -> Result<Vec<(f64, f64)>> {
    let gprime = phi.base_poly()?.derivative();
    if gprime.is_zero() {
        return Ok(Vec::new());
    }
    let x_lo = lo.exp() * (1.0 - 4.0 * f64::EPSILON);
    let x_hi = hi.exp() * (1.0 + 4.0 * f64::EPSILON);
    let width = rational_from_f64(x_lo * width_t)?;
    let roots = isolate_roots_in(
        &gprime,
        &rational_from_f64(x_lo)?,
        &rational_from_f64(x_hi)?,
        &width,
    )?;
    let mut gaps: Vec<(f64, f64)> = Vec::new();
    for r in roots {
        let mut a = lower_f64(&r.lo).ln();
        let mut b = upper_f64(&r.hi).ln();
        for _ in 0..4 {
            a = a.next_down();
            b = b.next_up();
        }
        let (a, b) = (a.max(lo), b.min(hi));
        if a > b {
            continue;
        }
        match gaps.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => gaps.push((a, b)),
        }
    }
    Ok(gaps)
}

/// `∫_lo^hi e^{2πiΦ(t)} dt` to absolute accuracy `tol`.
pub fn oscillatory_integral(phi: &ExpPoly, lo: f64, hi: f64, tol: f64) -> Result<OscIntegral> {
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if hi == lo {
        return Ok(OscIntegral {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            panels: 0,
        });
    }
    let top = phi.max_exponent().unwrap_or(0) as f64 * hi.abs().max(lo.abs());
    if top > super::window::MAX_EXPONENT {
        return Err(Error::InvalidArgument(format!(
            "phase exponent {top} out of floating-point range"
        )));
    }
    let phase = Phase::new(phi);
    if phi.is_constant() {
        let len = hi - lo;
        let node = phase.node(lo);
        return Ok(OscIntegral {
            value: node.cis() * len,
            error: len * node.phase_err(),
            panels: 1,
        });
    }
    let probe = phase.node(hi);
    if !probe.d.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidArgument("phase derivatives overflow".into()));
    }

    let n = phi.max_exponent().unwrap_or(1).max(1) as f64;
    let width_t = (tol / (8.0 * (n + 1.0))).clamp(1e-15, 1e-6);
    let gaps = stationary_gaps(phi, lo, hi, width_t)?;

    let mut frozen: Vec<Panel> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut cursor = lo;
    for &(a, b) in &gaps {
        if a > cursor {
            heap.push(eval_panel(&phase, cursor, a));
        }
        frozen.push(Panel {
            lo: a,
            hi: b,
            value: Complex64::new(0.0, 0.0),
            error: b - a,
            rounding: 0.0,
        });
        cursor = cursor.max(b);
    }
    if cursor < hi {
        heap.push(eval_panel(&phase, cursor, hi));
    }

    let total_of = |heap: &BinaryHeap<Panel>, frozen: &[Panel]| {
        heap.iter().chain(frozen).map(|p| p.error).sum::<f64>()
    };
    let mut total = total_of(&heap, &frozen);
    let mut iterations = 0usize;
    while total > tol && heap.len() + frozen.len() < MAX_PANELS {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        // rounding-dominated panels do not improve when split
        if mid <= worst.lo || mid >= worst.hi || worst.rounding >= 0.5 * worst.error {
            frozen.push(worst);
            continue;
        }
        let left = eval_panel(&phase, worst.lo, mid);
        let right = eval_panel(&phase, mid, worst.hi);
        total += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        iterations += 1;
        if iterations % 512 == 0 {
            total = total_of(&heap, &frozen);
        }
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value = panels.iter().map(|p| p.value).sum::<Complex64>();
    let error = panels.iter().map(|p| p.error).sum::<f64>();
    if error > tol {
        return Err(Error::NonConvergence {
            estimate: value.re,
            error,
        });
    }
    Ok(OscIntegral {
        value,
        error,
        panels: panels.len(),
    })
}

/// `μ̂_T` for an explicit phase `Φ` over the window.
pub fn mu_hat_of_phase(phi: &ExpPoly, window: &Window, tol: f64) -> Result<MuHat> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::InvalidArgument(format!("tol must lie in (0, 1e-3], got {tol}")));
    }
    let len = window.length();
    if phi.is_constant() {
        let value = (2.0 * PI * phi.coeff(0).fract()).cos();
        return Ok(MuHat {
            value,
            error: 0.0,
            panels: 0,
        });
    }
    match oscillatory_integral(phi, window.a, window.t, tol * len) {
        Ok(r) => Ok(MuHat {
            value: (r.value.re / len).clamp(-1.0, 1.0),
            error: r.error / len,
            panels: r.panels,
        }),
        Err(Error::NonConvergence { estimate, error }) => Err(Error::NonConvergence {
            estimate: estimate / len,
            error: error / len,
        }),
        Err(e) => Err(e),
    }
}

/// `μ̂_T(λ) = (1/(T-a)) ∫_a^T cos(2πΦ(t)) dt` with its error estimate.
pub fn mu_hat_real_estimate(
    family: &CurveFamily,
    window: &Window,
    lambda: &[f64],
    tol: f64,
) -> Result<MuHat> {
    window.validate_for(family)?;
    let phi = phi_from_frequency(family, lambda)?;
    mu_hat_of_phase(&phi, window, tol)
}

/// `μ̂_T(λ)` for the curve family; see [`mu_hat_real_estimate`].
pub fn mu_hat_real(family: &CurveFamily, window: &Window, lambda: &[f64], tol: f64) -> Result<f64> {
    mu_hat_real_estimate(family, window, lambda, tol).map(|m| m.value)
}
