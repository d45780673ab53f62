//! Real root isolation with Sturm sequences over exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::RationalPoly;
use super::rational::{abs_rational, rational_from_f64};
use crate::error::{Error, Result};

/// Default isolation width.
pub const ROOT_WIDTH: f64 = 1e-12;

/// Half-open interval `(lo, hi]` holding exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// Float summary of a root interval.
#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct RootEnclosure {
    pub lo: f64,
    pub hi: f64,
}

impl From<&RootInterval> for RootEnclosure {
    fn from(r: &RootInterval) -> Self {
        Self {
            lo: r.lo_f64(),
            hi: r.hi_f64(),
        }
    }
}

/// Integer polynomial scaled by a positive factor, evaluated by sign only.
#[derive(Clone, Debug)]
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn from_rational(p: &RationalPoly) -> Self {
        let lcm = p
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly(
            p.coeffs()
                .iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
    }

    /// Sign of the polynomial at `x`: evaluates `d^deg p(n/d)` over the integers.
    fn sign_at(&self, x: &BigRational) -> i8 {
        if self.0.is_empty() {
            return 0;
        }
        let (n, d) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner in homogeneous form: acc = sum a_i n^i d^(deg-i)
        for c in self.0.iter().rev() {
            acc = acc * n + c * &dpow;
            dpow *= d;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }
}

/// Sturm chain of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<IntPoly>,
}

impl SturmSequence {
    pub fn new(p: &RationalPoly) -> Self {
        let p = p.squarefree_part();
        let mut chain = vec![p.clone()];
        if !p.is_constant() {
            chain.push(p.derivative());
            loop {
                let n = chain.len();
                let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(-&r);
            }
        }
        Self {
            chain: chain.iter().map(IntPoly::from_rational).collect(),
        }
    }

    fn sign_variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for s in self.chain.iter().map(|p| p.sign_at(x)) {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.sign_variations(lo)
            .saturating_sub(self.sign_variations(hi))
    }

    fn sign_at(&self, x: &BigRational) -> i8 {
        self.chain[0].sign_at(x)
    }
}

/// Cauchy bound: every real root lies in `[-B, B]`.
pub fn cauchy_root_bound(p: &RationalPoly) -> BigRational {
    let Some(lead) = p.leading() else {
        return BigRational::one();
    };
    let lead = abs_rational(lead);
    let n = p.coeffs().len() - 1;
    let max_ratio = p.coeffs()[..n]
        .iter()
        .map(|c| abs_rational(c) / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    BigRational::one() + max_ratio
}

/// Isolates every root of `p` in `(0, bound]`, each interval refined to width `<= 1e-12`.
pub fn isolate_positive_roots(p: &RationalPoly, bound: f64) -> Result<Vec<RootInterval>> {
    let bound = rational_from_f64(bound)?;
    let width = rational_from_f64(ROOT_WIDTH)?;
    isolate_roots_in(p, &BigRational::zero(), &bound, &width)
}

/// Isolates every root of `p` in `(lo, hi]` with intervals of width `<= width`.
pub fn isolate_roots_in(
    p: &RationalPoly,
    lo: &BigRational,
    hi: &BigRational,
    width: &BigRational,
) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument(
            "root isolation of the zero polynomial".into(),
        ));
    }
    if !width.is_positive() {
        return Err(Error::InvalidArgument("isolation width must be positive".into()));
    }
    if hi <= lo || p.is_constant() {
        return Ok(Vec::new());
    }
    let sturm = SturmSequence::new(p);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), sturm.count_roots(lo, hi))];
    let two = BigRational::from_integer(2.into());
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(refine(&sturm, a, b, width));
            continue;
        }
        let mid = (&a + &b) / &two;
        let right = sturm.count_roots(&mid, &b);
        let left = count - right;
        // push right first so roots come out in increasing order
        stack.push((mid.clone(), b, right));
        stack.push((a, mid, left));
    }
    Ok(out)
}

/// Shrinks `(lo, hi]` holding exactly one root until `hi - lo <= width`.
fn refine(sturm: &SturmSequence, mut lo: BigRational, mut hi: BigRational, width: &BigRational) -> RootInterval {
    let two = BigRational::from_integer(2.into());
    let mut lo_sign = sturm.sign_at(&lo);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let s = sturm.sign_at(&mid);
        if s == 0 {
            return RootInterval { lo: mid.clone(), hi: mid };
        }
        if lo_sign == 0 {
            // lo is itself a root outside the half-open interval; fall back to counting
            if sturm.count_roots(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
                lo_sign = s;
            }
        } else if s == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RootInterval { lo, hi }
}

/// Shrinks an isolating interval further, to width `<= width`.
pub fn refine_root(p: &RationalPoly, root: &RootInterval, width: &BigRational) -> RootInterval {
    if root.is_exact() {
        return root.clone();
    }
    let sturm = SturmSequence::new(p);
    refine(&sturm, root.lo.clone(), root.hi.clone(), width)
}
