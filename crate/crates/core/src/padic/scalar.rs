use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polycore::{int_valuation, rational_pow, valuation};

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// `x mod p^n` for a rational `x` whose denominator is prime to `p`.
pub(crate) fn residue(x: &BigRational, modulus: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(x.denom(), modulus)?;
    Some((x.numer() * inv).mod_floor(modulus))
}

/// A `p`-adic number `p^v · u` with the unit `u` known modulo `p^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    p: u64,
    precision: u32,
    valuation: Option<i64>,
    unit: BigInt,
}

impl PadicScalar {
    pub const DEFAULT_PRECISION: u32 = 64;

    pub fn zero(p: u64) -> Result<Self> {
        require_prime(p)?;
        Ok(Self {
            p,
            precision: Self::DEFAULT_PRECISION,
            valuation: None,
            unit: BigInt::zero(),
        })
    }

    pub fn from_rational(x: &BigRational, p: u64) -> Result<Self> {
        Self::from_rational_with_precision(x, p, Self::DEFAULT_PRECISION)
    }

    pub fn from_rational_with_precision(x: &BigRational, p: u64, precision: u32) -> Result<Self> {
        require_prime(p)?;
        if precision == 0 {
            return Err(Error::Precision("precision must be at least one digit".into()));
        }
        let Some(v) = valuation(x, p) else {
            return Ok(Self {
                p,
                precision,
                valuation: None,
                unit: BigInt::zero(),
            });
        };
        let u = x * rational_pow(p, -v);
        let modulus = BigInt::from(p).pow(precision);
        let unit = residue(&u, &modulus).expect("unit part is prime to p");
        Ok(Self {
            p,
            precision,
            valuation: Some(v),
            unit,
        })
    }

    pub fn from_i64(x: i64, p: u64) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(x.into()), p)
    }

    /// `p^v · unit`; `unit` must be prime to `p` and is reduced modulo `p^precision`.
    pub fn from_parts(p: u64, valuation: i64, unit: BigInt, precision: u32) -> Result<Self> {
        require_prime(p)?;
        let modulus = BigInt::from(p).pow(precision);
        let unit = unit.mod_floor(&modulus);
        if int_valuation(&unit, p) != 0 {
            return Err(Error::InvalidArgument(format!(
                "unit {unit} is divisible by {p}"
            )));
        }
        Ok(Self {
            p,
            precision,
            valuation: Some(valuation),
            unit,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `None` for zero (valuation `+∞`).
    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// `‖x‖_p = p^{-v}`.
    pub fn norm(&self) -> f64 {
        self.valuation
            .map_or(0.0, |v| (self.p as f64).powi(-(v as i32)))
    }

    /// Exponent `A` with the value known modulo `p^A` (`None` when exactly zero).
    fn absolute_precision(&self) -> Option<i64> {
        self.valuation.map(|v| v + self.precision as i64)
    }

    /// The rational `p^v · u` with `0 <= u < p^N`.
    pub fn representative(&self) -> BigRational {
        match self.valuation {
            None => BigRational::zero(),
            Some(v) => BigRational::from_integer(self.unit.clone()) * rational_pow(self.p, v),
        }
    }

    fn with_absolute_precision(x: BigRational, p: u64, abs: Option<i64>) -> Self {
        let v = valuation(&x, p);
        match (v, abs) {
            (None, _) => Self {
                p,
                precision: Self::DEFAULT_PRECISION,
                valuation: None,
                unit: BigInt::zero(),
            },
            (Some(v), Some(a)) if v >= a => Self {
                p,
                precision: Self::DEFAULT_PRECISION,
                valuation: None,
                unit: BigInt::zero(),
            },
            (Some(v), abs) => {
                let precision = abs.map_or(Self::DEFAULT_PRECISION as i64, |a| a - v) as u32;
                let modulus = BigInt::from(p).pow(precision);
                let unit = residue(&(x * rational_pow(p, -v)), &modulus).expect("unit");
                Self {
                    p,
                    precision,
                    valuation: Some(v),
                    unit,
                }
            }
        }
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "mixing primes {} and {}",
                self.p, other.p
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let abs = match (self.absolute_precision(), other.absolute_precision()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(Self::with_absolute_precision(
            self.representative() + other.representative(),
            self.p,
            abs,
        ))
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        if !self.is_zero() {
            let modulus = BigInt::from(self.p).pow(self.precision);
            out.unit = (-&self.unit).mod_floor(&modulus);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        match (self.valuation, other.valuation) {
            (Some(a), Some(b)) => {
                let precision = self.precision.min(other.precision);
                let modulus = BigInt::from(self.p).pow(precision);
                Ok(Self {
                    p: self.p,
                    precision,
                    valuation: Some(a + b),
                    unit: (&self.unit * &other.unit).mod_floor(&modulus),
                })
            }
            _ => Self::zero(self.p),
        }
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            None => write!(f, "0"),
            Some(v) => write!(f, "{}^{} * {} (mod {}^{})", self.p, v, self.unit, self.p, self.precision),
        }
    }
}

/// `(r, n)` with `ψ(x) = exp(2πi r / p^n)` and `0 <= r < p^n`.
pub(crate) fn character_exponent(x: &BigRational, p: u64) -> (BigInt, u32) {
    match valuation(x, p) {
        Some(v) if v < 0 => {
            let n = (-v) as u32;
            let modulus = BigInt::from(p).pow(n);
            let scaled = x * BigRational::from_integer(modulus.clone());
            let r = residue(&scaled, &modulus).expect("p^n x is p-integral");
            (r, n)
        }
        _ => (BigInt::zero(), 0),
    }
}

fn cis_ratio(r: &BigInt, n: u32, p: u64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let modulus = BigInt::from(p).pow(n);
    let frac = BigRational::new(r.clone(), modulus).to_f64().unwrap_or(0.0);
    Complex64::cis(2.0 * std::f64::consts::PI * frac)
}

/// Tate character `ψ(x) = exp(2πi r_x / p^{n_x})`, trivial exactly on `ℤ_p`.
pub fn tate_character(x: &PadicScalar) -> Result<Complex64> {
    match x.valuation {
        Some(v) if v < 0 => {
            let n = (-v) as u32;
            if x.precision < n {
                return Err(Error::Precision(format!(
                    "unit known mod {}^{} but the character needs {} digits",
                    x.p, x.precision, n
                )));
            }
            let modulus = BigInt::from(x.p).pow(n);
            let r = x.unit.mod_floor(&modulus);
            Ok(cis_ratio(&r, n, x.p))
        }
        _ => Ok(Complex64::new(1.0, 0.0)),
    }
}

/// Tate character of an exact rational.
pub fn tate_character_rational(x: &BigRational, p: u64) -> Complex64 {
    let (r, n) = character_exponent(x, p);
    cis_ratio(&r, n, p)
}
