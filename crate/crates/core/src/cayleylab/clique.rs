use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::multivar::MultiPoly;
use crate::error::{Error, Result};
use crate::polycore::{cauchy_root_bound, isolate_roots_in, rational_from_f64, CurveFamily, RationalPoly};

/// Curve membership tolerance for float samples.
pub const CURVE_TOL: f64 = 1e-9;

/// The Bézout threshold `d = (Π d_i)² + 3`; cliques are bounded by `R(d, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BezoutData {
    pub product_bound: String,
    pub d: String,
    /// Symbolic, never evaluated.
    pub ramsey: String,
}

pub fn bezout_clique_data(degrees: &[u64]) -> Result<BezoutData> {
    if degrees.is_empty() || degrees.contains(&0) {
        return Err(Error::InvalidArgument("degrees must be >= 1".into()));
    }
    let prod: BigUint = degrees.iter().map(|&d| BigUint::from(d)).product();
    let bound = &prod * &prod;
    let d = &bound + 3u32;
    Ok(BezoutData {
        product_bound: bound.to_string(),
        ramsey: format!("R({d},{d})"),
        d: d.to_string(),
    })
}

/// Membership oracle for `±V`.
#[derive(Clone, Debug)]
pub enum CurveOracle {
    /// `V = {(f_1(s), ..., f_m(s))}`.
    Parametrized { family: CurveFamily, tol: f64 },
    /// Plane curve `V = {g(x, y) = 0}`.
    Implicit { g: MultiPoly, tol: f64 },
}

impl CurveOracle {
    pub fn parametrized(family: CurveFamily) -> Self {
        CurveOracle::Parametrized {
            family,
            tol: CURVE_TOL,
        }
    }

    pub fn implicit(g: MultiPoly) -> Result<Self> {
        if g.nvars() != 2 {
            return Err(Error::InvalidArgument("implicit curves must be planar".into()));
        }
        Ok(CurveOracle::Implicit { g, tol: CURVE_TOL })
    }

    pub fn dim(&self) -> usize {
        match self {
            CurveOracle::Parametrized { family, .. } => family.m(),
            CurveOracle::Implicit { .. } => 2,
        }
    }

    fn on_curve(&self, u: &[f64]) -> bool {
        match self {
            CurveOracle::Parametrized { family, tol } => on_parametrized(family, u, *tol),
            CurveOracle::Implicit { g, tol } => g.eval_f64(u).abs() <= tol * (1.0 + u.iter().map(|x| x.abs()).fold(0.0, f64::max)),
        }
    }

    /// `u ∈ ±V`, with `u ≠ 0`.
    pub fn contains(&self, u: &[f64]) -> bool {
        if u.iter().all(|&x| x == 0.0) {
            return false;
        }
        let neg: Vec<f64> = u.iter().map(|x| -x).collect();
        self.on_curve(u) || self.on_curve(&neg)
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

fn on_parametrized(family: &CurveFamily, u: &[f64], tol: f64) -> bool {
    if u.len() != family.m() {
        return false;
    }
    let f1 = &family.polys()[0];
    let check = |s: f64| {
        family
            .polys()
            .iter()
            .zip(u)
            .all(|(f, &x)| close(f.eval_f64(s), x, tol))
    };
    if f1.degree() == Some(1) {
        let c = f1.to_f64_coeffs();
        return check((u[0] - c[0]) / c[1]);
    }
    let Ok(target) = rational_from_f64(u[0]) else {
        return false;
    };
    let shifted = f1 - &RationalPoly::constant(target);
    let bound = cauchy_root_bound(&shifted) + BigRational::one();
    let width = BigRational::new(1.into(), (1u64 << 40).into());
    let Ok(roots) = isolate_roots_in(&shifted, &-bound.clone(), &bound, &width) else {
        return false;
    };
    roots.iter().any(|r| check(r.midpoint_f64()))
}

/// Sample points with the `±V` oracle.
#[derive(Clone, Debug)]
pub struct CliqueInstance {
    pub points: Vec<Vec<f64>>,
    pub oracle: CurveOracle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliqueResult {
    pub vertices: Vec<usize>,
    pub points: Vec<Vec<f64>>,
    /// Pairwise adjacency re-checked by the oracle.
    pub verified: bool,
}

impl CliqueInstance {
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let d: Vec<f64> = self.points[i].iter().zip(&self.points[j]).map(|(a, b)| a - b).collect();
        self.oracle.contains(&d)
    }
}

struct BronKerbosch<'a> {
    adj: &'a [Vec<u64>],
    best: Vec<usize>,
    cap: usize,
}

fn bits_iter(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &bits)| {
        (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
    })
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

impl BronKerbosch<'_> {
    fn run(&mut self, r: &mut Vec<usize>, mut p: Vec<u64>, mut x: Vec<u64>) {
        if self.best.len() >= self.cap {
            return;
        }
        if r.len() + count(&p) <= self.best.len() {
            return;
        }
        if count(&p) == 0 {
            if count(&x) == 0 && r.len() > self.best.len() {
                self.best = r.clone();
            }
            return;
        }
        let pivot = bits_iter(&p)
            .chain(bits_iter(&x))
            .max_by_key(|&u| count(&and(&p, &self.adj[u])))
            .expect("p is nonempty");
        let candidates: Vec<usize> = bits_iter(&p).filter(|&v| self.adj[pivot][v / 64] >> (v % 64) & 1 == 0).collect();
        for v in candidates {
            r.push(v);
            self.run(r, and(&p, &self.adj[v]), and(&x, &self.adj[v]));
            r.pop();
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
            if self.best.len() >= self.cap {
                return;
            }
        }
    }
}

/// Largest clique in the sample (stopping early at `max_size`), by Bron–Kerbosch with pivoting.
pub fn clique_search(instance: &CliqueInstance, max_size: usize) -> Result<CliqueResult> {
    let n = instance.points.len();
    if let Some(p) = instance.points.iter().find(|p| p.len() != instance.oracle.dim()) {
        return Err(Error::DimensionMismatch {
            expected: instance.oracle.dim(),
            got: p.len(),
        });
    }
    let words = n.div_ceil(64).max(1);
    let mut adj = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in i + 1..n {
            if instance.adjacent(i, j) {
                adj[i][j / 64] |= 1 << (j % 64);
                adj[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let mut bk = BronKerbosch {
        adj: &adj,
        best: Vec::new(),
        cap: max_size.max(1),
    };
    if n > 0 {
        let mut all = vec![0u64; words];
        for v in 0..n {
            all[v / 64] |= 1 << (v % 64);
        }
        bk.run(&mut Vec::new(), all, vec![0u64; words]);
    }
    let mut vertices = bk.best;
    vertices.truncate(max_size);
    vertices.sort_unstable();
    let verified = vertices
        .iter()
        .enumerate()
        .all(|(a, &i)| vertices[a + 1..].iter().all(|&j| instance.adjacent(i, j)));
    Ok(CliqueResult {
        points: vertices.iter().map(|&i| instance.points[i].clone()).collect(),
        vertices,
        verified,
    })
}

/// Checks `(s + r)² = s² + r²`: the parabola forces `sr = 0` in any triangle.
pub fn parabola_triangle_forces_degenerate(s: &BigRational, r: &BigRational) -> bool {
    let lhs = (s + r) * (s + r);
    let rhs = s * s + r * r;
    (lhs == rhs) == (s * r == BigRational::from_integer(0.into()))
}

/// `u` as `f64` coordinates, for building samples from exact data.
pub fn to_f64_point(u: &[BigRational]) -> Vec<f64> {
    u.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parabola() -> CurveOracle {
        CurveOracle::parametrized(CurveFamily::from_i64(&[&[0, 1], &[0, 0, 1]]).unwrap())
    }

    #[test]
    fn bezout_examples() {
        let b = bezout_clique_data(&[2]).unwrap();
        assert_eq!((b.product_bound.as_str(), b.d.as_str()), ("4", "7"));
        assert_eq!(b.ramsey, "R(7,7)");
        assert_eq!(bezout_clique_data(&[1]).unwrap().d, "4");
        let c = bezout_clique_data(&[2, 3]).unwrap();
        assert_eq!((c.product_bound.as_str(), c.d.as_str()), ("36", "39"));
        assert!(bezout_clique_data(&[0]).is_err());
    }

    #[test]
    fn parabola_example() {
        let inst = CliqueInstance {
            points: vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 4.0]],
            oracle: parabola(),
        };
        let c = clique_search(&inst, 10).unwrap();
        assert_eq!(c.vertices.len(), 2);
        assert!(c.verified);
        assert!(!inst.adjacent(1, 2));
        let empty = CliqueInstance {
            points: vec![],
            oracle: parabola(),
        };
        assert!(clique_search(&empty, 5).unwrap().vertices.is_empty());
    }

    #[test]
    fn line_through_origin_is_a_clique() {
        let oracle = CurveOracle::parametrized(CurveFamily::from_i64(&[&[0, 1], &[0, 2]]).unwrap());
        let inst = CliqueInstance {
            points: vec![vec![0.0, 0.0], vec![1.0, 2.0], vec![5.0, 1.0], vec![3.0, 6.0], vec![-2.0, -4.0]],
            oracle,
        };
        let c = clique_search(&inst, 10).unwrap();
        assert_eq!(c.vertices, vec![0, 1, 3, 4]);
        assert!(c.verified);
        assert_eq!(clique_search(&inst, 2).unwrap().vertices.len(), 2);
    }

    #[test]
    fn implicit_oracle_matches_parametrized() {
        let g = MultiPoly::parse(2, &[("1", vec![2, 0]), ("-1", vec![0, 1])]).unwrap();
        let imp = CurveOracle::implicit(g).unwrap();
        let par = parabola();
        for u in [[1.0, 1.0], [2.0, 4.0], [1.0, 3.0], [-3.0, -9.0], [0.5, 0.25]] {
            assert_eq!(imp.contains(&u), par.contains(&u), "{u:?}");
        }
        assert!(!par.contains(&[0.0, 0.0]));
    }

    #[test]
    fn nonlinear_first_coordinate() {
        let oracle = CurveOracle::parametrized(CurveFamily::from_i64(&[&[0, 0, 1], &[0, 0, 0, 1]]).unwrap());
        assert!(oracle.contains(&[4.0, -8.0]));
        assert!(oracle.contains(&[-4.0, -8.0]));
        assert!(!oracle.contains(&[4.0, 7.0]));
    }

    #[test]
    fn algebraic_oracle() {
        for (s, r) in [(1, 2), (0, 5), (-3, 7), (4, 0)] {
            let (s, r) = (BigRational::from_integer(s.into()), BigRational::from_integer(r.into()));
            assert!(parabola_triangle_forces_degenerate(&s, &r));
        }
    }
}
