use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::exppoly::ExpPoly;
use super::linalg::{inverse, rank, spectral_norm_upper, vandermonde_interpolation, Matrix};
use super::poly::RationalPoly;
use super::rational::{format_rational, upper_f64};
use super::roots::{cauchy_root_bound, isolate_roots_in, ROOT_WIDTH};
use crate::error::{Error, Result};

/// The polynomials `f_1, ..., f_m` defining the curve `s ↦ (f_1(s), ..., f_m(s))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveFamily {
    polys: Vec<RationalPoly>,
    n: usize,
}

/// Outcome of the exact independence test of `1, f_1, ..., f_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Independence {
    pub independent: bool,
    pub rank: usize,
}

impl CurveFamily {
    /// Requires at least two polynomials, none of them constant.
    pub fn new(polys: Vec<RationalPoly>) -> Result<Self> {
        if polys.len() < 2 {
            return Err(Error::DegenerateFamily(format!(
                "need m >= 2 polynomials, got {}",
                polys.len()
            )));
        }
        if let Some(i) = polys.iter().position(RationalPoly::is_constant) {
            return Err(Error::DegenerateFamily(format!(
                "f_{} is constant, so 1, f_1, ..., f_m cannot be independent",
                i + 1
            )));
        }
        let n = polys.iter().filter_map(RationalPoly::degree).max().unwrap_or(0);
        Ok(Self { polys, n })
    }

    /// Parses coefficient lists `a_0, a_1, ...` of `"num/den"` literals.
    pub fn parse<S: AsRef<str>>(lists: &[Vec<S>]) -> Result<Self> {
        let polys = lists
            .iter()
            .map(|l| RationalPoly::parse(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(polys)
    }

    pub fn from_i64(lists: &[&[i64]]) -> Result<Self> {
        Self::new(lists.iter().map(|l| RationalPoly::from_i64(l)).collect())
    }

    pub fn polys(&self) -> &[RationalPoly] {
        &self.polys
    }

    pub fn m(&self) -> usize {
        self.polys.len()
    }

    /// Maximal degree of the `f_i`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.degree().unwrap_or(0)).collect()
    }

    /// The `m × n` matrix `(a_ij)` for `j = 1..n`.
    pub fn coeff_matrix(&self) -> Matrix {
        self.polys
            .iter()
            .map(|p| (1..=self.n).map(|j| p.coeff(j)).collect())
            .collect()
    }

    /// `f_i(0)` for each `i`.
    pub fn constant_terms(&self) -> Vec<BigRational> {
        self.polys.iter().map(|p| p.coeff(0)).collect()
    }

    /// Rows of `f_1, ..., f_m` in the basis `x^n, ..., x, 1`, plus the row of `1`.
    pub fn augmented_matrix(&self) -> Matrix {
        let mut rows: Matrix = self
            .polys
            .iter()
            .map(|p| (0..=self.n).rev().map(|j| p.coeff(j)).collect())
            .collect();
        let mut last = vec![BigRational::zero(); self.n + 1];
        last[self.n] = BigRational::one();
        rows.push(last);
        rows
    }

    /// Coefficient lists as `"num/den"` strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.polys.iter().map(RationalPoly::to_strings).collect()
    }

    pub fn require_independent(&self) -> Result<()> {
        let ind = check_independence(self);
        if ind.independent {
            Ok(())
        } else {
            Err(Error::IndependenceViolation {
                rank: ind.rank,
                expected: self.m() + 1,
            })
        }
    }
}

/// Exact rank test: `1, f_1, ..., f_m` are independent iff the augmented matrix has rank `m + 1`.
pub fn check_independence(family: &CurveFamily) -> Independence {
    let r = rank(&family.augmented_matrix());
    Independence {
        independent: r == family.m() + 1,
        rank: r,
    }
}

/// `Φ = Σ λ_i f_i(e^t)`: coefficient of `e^{jt}` is `Σ_i λ_i a_ij`.
pub fn phi_from_frequency(family: &CurveFamily, lambda: &[f64]) -> Result<ExpPoly> {
    if lambda.len() != family.m() {
        return Err(Error::DimensionMismatch {
            expected: family.m(),
            got: lambda.len(),
        });
    }
    let mut terms = Vec::with_capacity(family.n() + 1);
    for j in 0..=family.n() {
        let c: f64 = family
            .polys()
            .iter()
            .zip(lambda)
            .map(|(p, &l)| l * p.coeff(j).to_f64().unwrap_or(f64::NAN))
            .sum();
        terms.push((j as u32, c));
    }
    Ok(ExpPoly::new(terms))
}

/// Threshold `a_0 = max{t >= 0 : f_1(e^t) = ... = f_m(e^t) = 0}`, with `a_0 = 0` when no
/// common root `s >= 1` exists.
///
/// Common roots are the roots of `gcd(f_1, ..., f_m)`; the largest is isolated exactly
/// and `ln` of the upper endpoint of its isolating interval is returned.
pub fn compute_a0_real(family: &CurveFamily) -> f64 {
    let g = family
        .polys()
        .iter()
        .skip(1)
        .fold(family.polys()[0].clone(), |acc, p| RationalPoly::gcd(&acc, p));
    if g.is_constant() {
        return 0.0;
    }
    let bound = cauchy_root_bound(&g);
    let width = BigRational::from_float(ROOT_WIDTH).expect("finite");
    let roots = isolate_roots_in(&g, &BigRational::zero(), &bound, &width)
        .expect("gcd of nonconstant polynomials is nonzero");
    match roots.last() {
        Some(r) if r.hi >= BigRational::one() => upper_f64(&r.hi).ln().max(0.0),
        _ => 0.0,
    }
}

/// True when every `f_i(0) = 0` and `0` is the only common root, in which case only the
/// low-frequency case occurs and the threshold may be taken as `-∞`.
pub fn a0_may_be_minus_infinity(family: &CurveFamily) -> bool {
    if !family.constant_terms().iter().all(Zero::is_zero) {
        return false;
    }
    let g = family
        .polys()
        .iter()
        .skip(1)
        .fold(family.polys()[0].clone(), |acc, p| RationalPoly::gcd(&acc, p));
    // g = x^k c(x) with c(0) != 0; 0 must be the only real root
    let mut reduced = g.clone();
    while reduced.coeff(0).is_zero() && !reduced.is_zero() {
        reduced = RationalPoly::new(reduced.coeffs()[1..].to_vec());
    }
    if reduced.is_constant() {
        return true;
    }
    let bound = cauchy_root_bound(&reduced);
    let width = BigRational::one();
    isolate_roots_in(&reduced, &-bound.clone(), &bound, &width)
        .map(|r| r.is_empty())
        .unwrap_or(false)
}

/// Constants driving the interval decompositions of both frequency regimes.
#[derive(Clone, Debug, Serialize)]
pub struct HighFreqConstants {
    pub m: usize,
    pub n: usize,
    /// `M`: largest `||A^{-1}||_op` over invertible `m × m` column submatrices (rounded up).
    pub op_norm_max: f64,
    /// Column indices (1-based exponents) of the maximizing submatrix.
    pub op_norm_columns: Vec<usize>,
    /// `L = (Σ f_i(0)²)^{1/2}` (rounded up).
    pub l_norm: f64,
    /// `ε = 1/(8√m L M)` (rounded down); `None` when `L = 0`.
    pub epsilon: Option<f64>,
    /// `H = max_k |α_k|` (rounded up).
    pub h: f64,
    /// `H' = max_ℓ max_k |β^{(ℓ)}_k|` (rounded up).
    pub h_prime: f64,
    /// `α_k` as `"num/den"`.
    pub alphas: Vec<String>,
    /// `β^{(ℓ)}_k` for `ℓ = 1..n`, as `"num/den"`.
    pub betas: Vec<Vec<String>>,
}

impl HighFreqConstants {
    /// `L = 0`: every `f_i(0) = 0` and the high-frequency case cannot occur.
    pub fn high_frequency_vacuous(&self) -> bool {
        self.epsilon.is_none()
    }
}

fn max_abs(v: &[BigRational]) -> BigRational {
    v.iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Computes `M, L, ε, H, H'` for an independent family.
pub fn high_freq_constants(family: &CurveFamily) -> Result<HighFreqConstants> {
    family.require_independent()?;
    let (m, n) = (family.m(), family.n());
    let a = family.coeff_matrix();

    let mut best: Option<(f64, Vec<usize>)> = None;
    for cols in combinations(n, m) {
        let sub: Matrix = a
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        if let Some(inv) = inverse(&sub) {
            let norm = spectral_norm_upper(&inv);
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, cols.iter().map(|c| c + 1).collect()));
            }
        }
    }
    let (op_norm_max, op_norm_columns) =
        best.ok_or_else(|| Error::Consistency("independent family without invertible submatrix".into()))?;

    let l_sq = family
        .constant_terms()
        .iter()
        .fold(BigRational::zero(), |acc, c| acc + c * c);
    let l_norm = if l_sq.is_zero() {
        0.0
    } else {
        upper_f64(&l_sq).sqrt().next_up()
    };
    let epsilon = (l_norm > 0.0).then(|| {
        let denom = 8.0 * (m as f64).sqrt().next_up() * l_norm * op_norm_max;
        // two roundings in the product, each at most half an ulp
        (1.0 / denom.next_up().next_up()).next_down()
    });

    let ones = vec![BigRational::one(); n];
    let alphas = vandermonde_interpolation(n, &ones);
    let h = upper_f64(&max_abs(&alphas));

    let mut h_prime_exact = BigRational::zero();
    let mut betas = Vec::with_capacity(n);
    for ell in 1..=n {
        let delta: Vec<BigRational> = (1..=n)
            .map(|j| if j == ell { BigRational::one() } else { BigRational::zero() })
            .collect();
        let beta = vandermonde_interpolation(n, &delta);
        let mx = max_abs(&beta);
        if mx > h_prime_exact {
            h_prime_exact = mx;
        }
        betas.push(beta.iter().map(format_rational).collect());
    }

    Ok(HighFreqConstants {
        m,
        n,
        op_norm_max,
        op_norm_columns,
        l_norm,
        epsilon,
        h,
        h_prime: upper_f64(&h_prime_exact),
        alphas: alphas.iter().map(format_rational).collect(),
        betas,
    })
}

/// Exact `α_1..α_n` with `Σ_k α_k j^k = 1` for `j = 1..n`.
pub fn low_frequency_alphas(n: usize) -> Vec<BigRational> {
    vandermonde_interpolation(n, &vec![BigRational::one(); n])
}

/// Exact `β_1..β_n` with `Σ_k β_k j^k = δ_{jℓ}`.
pub fn high_frequency_betas(n: usize, ell: usize) -> Vec<BigRational> {
    let delta: Vec<BigRational> = (1..=n)
        .map(|j| if j == ell { BigRational::one() } else { BigRational::zero() })
        .collect();
    vandermonde_interpolation(n, &delta)
}

/// `Σ_i λ_i f_i(0)` as used by the frequency case split.
pub fn constant_pairing(family: &CurveFamily, lambda: &[f64]) -> f64 {
    family
        .constant_terms()
        .iter()
        .zip(lambda)
        .map(|(c, l)| l * c.to_f64().unwrap_or(f64::NAN))
        .sum()
}
