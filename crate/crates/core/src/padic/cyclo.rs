use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Exact element `Σ q_e ζ^e` of the cyclotomic field `ℚ(ζ)`, `ζ = exp(2πi / p^L)`.
///
/// Character sums over residues land here, so `p`-adic integrals stay exact. The level
/// `L` grows on demand when terms from finer levels are added.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloSum {
    p: u64,
    level: u32,
    terms: BTreeMap<BigInt, BigRational>,
}

impl CycloSum {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            level: 0,
            terms: BTreeMap::new(),
        }
    }

    pub fn rational(p: u64, q: BigRational) -> Self {
        let mut s = Self::zero(p);
        s.add_root(&BigInt::zero(), 0, q);
        s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.level)
    }

    fn lift(&mut self, level: u32) {
        if level <= self.level {
            return;
        }
        let factor = BigInt::from(self.p).pow(level - self.level);
        self.terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(e, q)| (e * &factor, q))
            .collect();
        self.level = level;
    }

    /// Adds `q · exp(2πi e / p^level)`.
    pub fn add_root(&mut self, e: &BigInt, level: u32, q: BigRational) {
        if q.is_zero() {
            return;
        }
        self.lift(level);
        let e = e * BigInt::from(self.p).pow(self.level - level);
        let e = e.mod_floor(&self.modulus());
        let slot = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add_assign(&mut self, other: &CycloSum) {
        debug_assert_eq!(self.p, other.p);
        for (e, q) in &other.terms {
            self.add_root(e, other.level, q.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &CycloSum) {
        for (e, q) in &other.terms {
            self.add_root(e, other.level, -q.clone());
        }
    }

    pub fn scale(&mut self, c: &BigRational) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for q in self.terms.values_mut() {
            *q *= c;
        }
    }

    pub fn conj(&self) -> CycloSum {
        let m = self.modulus();
        let mut out = CycloSum {
            p: self.p,
            level: self.level,
            terms: BTreeMap::new(),
        };
        for (e, q) in &self.terms {
            out.add_root(&(&m - e).mod_floor(&m), self.level, q.clone());
        }
        out
    }

    /// `z + z̄ = 2 Re z`, exact.
    pub fn twice_real_part(&self) -> CycloSum {
        let mut out = self.conj();
        out.add_assign(self);
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        let m = self.modulus();
        self.terms
            .iter()
            .map(|(e, q)| {
                let frac = BigRational::new(e.clone(), m.clone()).to_f64().unwrap_or(0.0);
                Complex64::cis(2.0 * PI * frac) * q.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Rewrites in the basis `1, ζ, ..., ζ^{φ(p^L)-1}` using `Φ_{p^L}(ζ) = 0`.
    pub fn reduce(&mut self) {
        if self.level == 0 {
            return;
        }
        let step = BigInt::from(self.p).pow(self.level - 1);
        let phi = &step * BigInt::from(self.p - 1);
        loop {
            let Some((e, q)) = self.terms.iter().next_back().map(|(e, q)| (e.clone(), q.clone())) else {
                break;
            };
            if e < phi {
                break;
            }
            self.terms.remove(&e);
            // ζ^e = -Σ_{j=0}^{p-2} ζ^{e - (p-1-j) p^{L-1}}
            let base = &e - &phi;
            for j in 0..self.p - 1 {
                let target = &base + &step * BigInt::from(j);
                let level = self.level;
                self.add_root(&target, level, -q.clone());
            }
        }
    }

    /// The value as a rational number when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        let mut r = self.clone();
        r.reduce();
        match r.terms.len() {
            0 => Some(BigRational::zero()),
            1 => r.terms.get(&BigInt::zero()).cloned(),
            _ => None,
        }
    }
}
