use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::polycore::{check_independence, parse_rational, rank, CurveFamily, RationalPoly};

/// Polynomial in `d` variables with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    /// Terms `(exponents, coefficient)`; repeated monomials are summed.
    pub fn new(nvars: usize, terms: Vec<(Vec<u32>, BigRational)>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidArgument("need at least one variable".into()));
        }
        let mut map: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            *map.entry(e).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self { nvars, terms: map })
    }

    /// Terms given as `(coefficient literal, exponents)`.
    pub fn parse<S: AsRef<str>>(nvars: usize, terms: &[(S, Vec<u32>)]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|(c, e)| Ok((e.clone(), parse_rational(c.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nvars, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn max_var_degree(&self) -> u32 {
        self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0)
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let c = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
                e.iter().zip(x).fold(c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }
}

/// Rank of `1, F_1, ..., F_m` in the monomial basis.
fn multi_rank(polys: &[MultiPoly]) -> usize {
    let nvars = polys[0].nvars;
    let mut monomials: BTreeSet<Vec<u32>> = polys.iter().flat_map(|p| p.terms.keys().cloned()).collect();
    monomials.insert(vec![0; nvars]);
    let mut rows: Vec<Vec<BigRational>> = polys
        .iter()
        .map(|p| {
            monomials
                .iter()
                .map(|e| p.terms.get(e).cloned().unwrap_or_else(BigRational::zero))
                .collect()
        })
        .collect();
    rows.push(
        monomials
            .iter()
            .map(|e| if e.iter().all(|&k| k == 0) { BigRational::one() } else { BigRational::zero() })
            .collect(),
    );
    rank(&rows)
}

/// `f_i(t) = F_i(t^{ℓ^0}, t^{ℓ^1}, ..., t^{ℓ^{d-1}})` with `ℓ = 1 + max per-variable degree`.
///
/// The exponent map `α ↦ Σ α_i ℓ^i` is injective on `{0..ℓ-1}^d`, so independence survives.
pub fn multivariate_reduce(polys: &[MultiPoly]) -> Result<CurveFamily> {
    let Some(first) = polys.first() else {
        return Err(Error::DegenerateFamily("empty family".into()));
    };
    let d = first.nvars;
    if let Some(p) = polys.iter().find(|p| p.nvars != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: p.nvars,
        });
    }
    let r = multi_rank(polys);
    if r != polys.len() + 1 {
        return Err(Error::IndependenceViolation {
            rank: r,
            expected: polys.len() + 1,
        });
    }
    let ell = polys.iter().map(MultiPoly::max_var_degree).max().unwrap_or(0) as u64 + 1;
    let weights: Vec<u64> = (0..d)
        .map(|i| {
            ell.checked_pow(i as u32)
                .ok_or_else(|| Error::InvalidArgument("substituted degree overflows".into()))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(polys.len());
    for p in polys {
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (e, c) in &p.terms {
            let deg: u64 = e.iter().zip(&weights).map(|(&k, &w)| k as u64 * w).sum();
            if deg > 1 << 16 {
                return Err(Error::InvalidArgument(format!("substituted degree {deg} too large")));
            }
            let deg = deg as usize;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigRational::zero());
            }
            coeffs[deg] += c;
        }
        out.push(RationalPoly::new(coeffs));
    }
    let family = CurveFamily::new(out).map_err(|e| Error::Consistency(format!("reduction produced {e}")))?;
    let ind = check_independence(&family);
    if !ind.independent {
        return Err(Error::Consistency(format!(
            "substitution lost independence (rank {})",
            ind.rank
        )));
    }
    Ok(family)
}
