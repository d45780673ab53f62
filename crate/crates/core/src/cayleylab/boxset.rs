use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::CurveFamily;
use crate::realosc::Window;

/// Closed axis-aligned box; infinite bounds are allowed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

/// Union of boxes, optionally replicated by the lattice `⊕ P_j ℤ e_j`.
///
/// A period of `0` leaves that axis non-periodic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxSet {
    pub dim: usize,
    pub boxes: Vec<AxisBox>,
    pub period: Option<Vec<f64>>,
}

/// Integers `k` with `[lo, hi] + kP` meeting `[a, b]`, or `k = 0` only when `P = 0`.
fn shifts_meeting(lo: f64, hi: f64, p: f64, a: f64, b: f64) -> Option<(f64, f64)> {
    if p == 0.0 || !lo.is_finite() || !hi.is_finite() {
        return (lo <= b && a <= hi).then_some((0.0, 0.0));
    }
    let k0 = ((a - hi) / p).ceil();
    let k1 = ((b - lo) / p).floor();
    (k0 <= k1).then_some((k0, k1))
}

/// Some `k` with `[a, b] ⊂ [lo, hi] + kP`.
fn shift_containing(lo: f64, hi: f64, p: f64, a: f64, b: f64) -> bool {
    if p == 0.0 || !lo.is_finite() || !hi.is_finite() {
        return lo <= a && b <= hi;
    }
    let k0 = ((b - hi) / p).ceil();
    let k1 = ((a - lo) / p).floor();
    k0 <= k1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cover {
    Inside,
    Outside,
    Partial,
}

impl BoxSet {
    pub fn new(dim: usize, boxes: Vec<AxisBox>, period: Option<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("BoxSet needs dimension >= 1".into()));
        }
        for b in &boxes {
            if b.lo.len() != dim || b.hi.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: b.lo.len().max(b.hi.len()),
                });
            }
            if b.lo.iter().zip(&b.hi).any(|(l, h)| l.is_nan() || h.is_nan() || l > h) {
                return Err(Error::InvalidArgument(format!("box {:?} is empty or malformed", b)));
            }
        }
        if let Some(p) = &period {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::InvalidArgument("periods must be finite and >= 0".into()));
            }
        }
        Ok(Self { dim, boxes, period })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            boxes: Vec::new(),
            period: None,
        }
    }

    pub fn whole_space(dim: usize) -> Self {
        Self {
            dim,
            boxes: vec![AxisBox {
                lo: vec![f64::NEG_INFINITY; dim],
                hi: vec![f64::INFINITY; dim],
            }],
            period: None,
        }
    }

    /// `{x : x_axis mod period ∈ [lo, hi]}` in `ℝ^dim`.
    pub fn stripes(dim: usize, axis: usize, lo: f64, hi: f64, period: f64) -> Result<Self> {
        if axis >= dim {
            return Err(Error::InvalidArgument(format!("axis {axis} out of range")));
        }
        let mut blo = vec![f64::NEG_INFINITY; dim];
        let mut bhi = vec![f64::INFINITY; dim];
        blo[axis] = lo;
        bhi[axis] = hi;
        let mut p = vec![0.0; dim];
        p[axis] = period;
        Self::new(dim, vec![AxisBox { lo: blo, hi: bhi }], Some(p))
    }

    fn period_of(&self, j: usize) -> f64 {
        self.period.as_ref().map_or(0.0, |p| p[j])
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && self.boxes.iter().any(|b| {
                (0..self.dim).all(|j| shifts_meeting(b.lo[j], b.hi[j], self.period_of(j), x[j], x[j]).is_some())
            })
    }

    fn classify(&self, lo: &[f64], hi: &[f64]) -> Cover {
        let mut meets = false;
        for b in &self.boxes {
            let all_meet = (0..self.dim).all(|j| shifts_meeting(b.lo[j], b.hi[j], self.period_of(j), lo[j], hi[j]).is_some());
            if !all_meet {
                continue;
            }
            if (0..self.dim).all(|j| shift_containing(b.lo[j], b.hi[j], self.period_of(j), lo[j], hi[j])) {
                return Cover::Inside;
            }
            meets = true;
        }
        if meets {
            Cover::Partial
        } else {
            Cover::Outside
        }
    }
}

/// `|I ∩ B_r| / |B_r|` with its error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub radius: f64,
    pub estimate: f64,
    /// Half the volume of undecided cells, relative to `|B_r|`.
    pub error: f64,
    pub undecided_cells: usize,
}

fn unit_ball_volume(dim: usize) -> f64 {
    // V_d = V_{d-2} · 2π/d
    let mut v = [1.0, 2.0];
    for d in 2..=dim {
        let next = v[d % 2] * 2.0 * std::f64::consts::PI / d as f64;
        v[d % 2] = next;
    }
    v[dim % 2]
}

fn ball_cover(lo: &[f64], hi: &[f64], r: f64) -> Cover {
    let (mut near, mut far) = (0.0, 0.0);
    for (&l, &h) in lo.iter().zip(hi) {
        let n = if l > 0.0 {
            l
        } else if h < 0.0 {
            -h
        } else {
            0.0
        };
        let f = l.abs().max(h.abs());
        near += n * n;
        far += f * f;
    }
    if far <= r * r {
        Cover::Inside
    } else if near >= r * r {
        Cover::Outside
    } else {
        Cover::Partial
    }
}

struct DensityWalk<'a> {
    set: &'a BoxSet,
    r: f64,
    max_depth: u32,
    /// Estimated `|I ∩ B_r|` and `|B_r|`, both counting undecided leaves at half volume.
    inside: f64,
    ball: f64,
    undecided: f64,
    undecided_cells: usize,
}

impl DensityWalk<'_> {
    fn visit(&mut self, lo: Vec<f64>, hi: Vec<f64>, depth: u32) {
        let ball = ball_cover(&lo, &hi, self.r);
        if ball == Cover::Outside {
            return;
        }
        let vol: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
        let set = self.set.classify(&lo, &hi);
        if ball == Cover::Inside && set != Cover::Partial {
            self.ball += vol;
            if set == Cover::Inside {
                self.inside += vol;
            }
            return;
        }
        if depth == self.max_depth {
            let in_ball = if ball == Cover::Inside { vol } else { vol / 2.0 };
            self.ball += in_ball;
            match set {
                Cover::Inside => self.inside += in_ball,
                Cover::Partial => self.inside += in_ball / 2.0,
                Cover::Outside => {}
            }
            self.undecided += vol / 2.0;
            self.undecided_cells += 1;
            return;
        }
        let d = lo.len();
        for corner in 0..1usize << d {
            let mut clo = lo.clone();
            let mut chi = hi.clone();
            for j in 0..d {
                let mid = 0.5 * (lo[j] + hi[j]);
                if corner >> j & 1 == 0 {
                    chi[j] = mid;
                } else {
                    clo[j] = mid;
                }
            }
            self.visit(clo, chi, depth + 1);
        }
    }
}

/// Estimates `|I ∩ B_r| / |B_r|` for each radius by adaptive subdivision of `[-r, r]^m`.
///
/// Undecided leaves count at half volume in both numerator and denominator; the reported
/// error is their total half-volume relative to the exact `|B_r|`.
pub fn upper_density_estimate(set: &BoxSet, radii: &[f64]) -> Result<Vec<DensityEstimate>> {
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("radii must be positive and increasing".into()));
    }
    let max_depth = match set.dim {
        1 => 24,
        2 => 11,
        3 => 7,
        _ => 4,
    };
    Ok(radii
        .iter()
        .map(|&r| {
            let mut walk = DensityWalk {
                set,
                r,
                max_depth,
                inside: 0.0,
                ball: 0.0,
                undecided: 0.0,
                undecided_cells: 0,
            };
            walk.visit(vec![-r; set.dim], vec![r; set.dim], 0);
            let exact = unit_ball_volume(set.dim) * r.powi(set.dim as i32);
            DensityEstimate {
                radius: r,
                estimate: (walk.inside / walk.ball).clamp(0.0, 1.0),
                error: walk.undecided / exact,
                undecided_cells: walk.undecided_cells,
            }
        })
        .collect())
}

/// Outcome of [`config_search`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome")]
pub enum ConfigOutcome {
    Found {
        x1: Vec<f64>,
        x2: Vec<f64>,
        s: f64,
        /// `‖x1 - x2 - F(s)‖_∞`.
        residual: f64,
    },
    /// The search failed; this does not prove that no configuration exists.
    NotFound { scanned: usize },
}

impl ConfigOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, ConfigOutcome::Found { .. })
    }
}

/// A point of `I ∩ (I - v)`, if the box structure yields one.
fn pair_for(set: &BoxSet, v: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    for b1 in &set.boxes {
        for b2 in &set.boxes {
            let mut x2 = Vec::with_capacity(set.dim);
            for j in 0..set.dim {
                // x ∈ [lo1, hi1] and x + v ∈ [lo2, hi2] + kP
                let p = set.period_of(j);
                let (lo2, hi2) = (b2.lo[j] - v[j], b2.hi[j] - v[j]);
                let (k, _) = shifts_meeting(lo2, hi2, p, b1.lo[j], b1.hi[j])?;
                let lo = b1.lo[j].max(lo2 + k * p);
                let hi = b1.hi[j].min(hi2 + k * p);
                let x = match (lo.is_finite(), hi.is_finite()) {
                    _ if lo < 0.0 && 0.0 < hi => 0.0,
                    (true, true) => 0.5 * (lo + hi),
                    (true, false) => lo + 1.0,
                    (false, true) => hi - 1.0,
                    (false, false) => 0.0,
                };
                x2.push(x);
            }
            let x1: Vec<f64> = x2.iter().zip(v).map(|(a, b)| a + b).collect();
            if set.contains(&x1) && set.contains(&x2) {
                return Some((x1, x2));
            }
        }
    }
    None
}

/// Searches for `x1, x2 ∈ I` with `x1 - x2 = F(s)`, `s ∈ [e^a, e^T]`.
///
/// Scans `s` with the given step, then once more with a sixteenth of it.
pub fn config_search(family: &CurveFamily, window: &Window, set: &BoxSet, step: f64) -> Result<ConfigOutcome> {
    if !(step > 0.0) {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    if set.dim != family.m() {
        return Err(Error::DimensionMismatch {
            expected: family.m(),
            got: set.dim,
        });
    }
    let (s0, s1) = (window.a.exp(), window.t.exp());
    let mut scanned = 0usize;
    for h in [step, step / 16.0] {
        let count = ((s1 - s0) / h).floor() as usize + 1;
        if count > 50_000_000 {
            break;
        }
        for i in 0..=count {
            let s = (s0 + i as f64 * h).min(s1);
            scanned += 1;
            let v: Vec<f64> = family.polys().iter().map(|f| f.eval_f64(s)).collect();
            if let Some((x1, x2)) = pair_for(set, &v) {
                let residual = x1
                    .iter()
                    .zip(&x2)
                    .zip(&v)
                    .map(|((a, b), c)| (a - b - c).abs())
                    .fold(0.0, f64::max);
                return Ok(ConfigOutcome::Found { x1, x2, s, residual });
            }
        }
    }
    Ok(ConfigOutcome::NotFound { scanned })
}
