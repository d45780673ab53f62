use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::Serialize;

use super::poly::RationalPoly;
use super::rational::rational_from_f64;
use crate::error::Result;

/// Exponential polynomial `Φ(t) = Σ_j c_j e^{jt}` with integer exponents `j >= 0`.
///
/// Writing `x = e^t`, `Φ(t) = g(e^t)` for the ordinary polynomial `g(x) = Σ c_j x^j`,
/// and `Φ^{(k)}(t) = g_k(e^t)` with `g_k(x) = Σ c_j j^k x^j`.
#[derive(Clone, Debug, PartialEq, Default, Serialize)]
pub struct ExpPoly {
    terms: BTreeMap<u32, f64>,
}

impl ExpPoly {
    /// Builds from `(exponent, coefficient)` pairs; exact zeros are dropped and repeats summed.
    pub fn new(terms: impl IntoIterator<Item = (u32, f64)>) -> Self {
        let mut map = BTreeMap::new();
        for (j, c) in terms {
            *map.entry(j).or_insert(0.0) += c;
        }
        map.retain(|_, c| *c != 0.0);
        Self { terms: map }
    }

    pub fn terms(&self) -> &BTreeMap<u32, f64> {
        &self.terms
    }

    pub fn coeff(&self, j: u32) -> f64 {
        self.terms.get(&j).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no exponent `j >= 1` carries a nonzero coefficient.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&j| j == 0)
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn max_exponent(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&j, &c)| if j == 0 { c } else { c * (j as f64 * t).exp() })
            .sum()
    }

    /// `Φ^{(k)}`: the coefficient of `e^{jt}` becomes `c_j j^k`.
    pub fn derivative(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        Self::new(
            self.terms
                .iter()
                .map(|(&j, &c)| (j, c * (j as f64).powi(k as i32))),
        )
    }

    /// Values `Φ^{(0)}(t), ..., Φ^{(kmax)}(t)` sharing the exponentials.
    pub fn derivatives_at(&self, t: f64, kmax: usize) -> Vec<f64> {
        let mut out = vec![0.0; kmax + 1];
        for (&j, &c) in &self.terms {
            let mut term = if j == 0 { c } else { c * (j as f64 * t).exp() };
            let jf = j as f64;
            for slot in out.iter_mut() {
                *slot += term;
                term *= jf;
            }
        }
        out
    }

    /// The polynomial `g` with `Φ(t) = g(e^t)`, with exact (dyadic) coefficients.
    pub fn base_poly(&self) -> Result<RationalPoly> {
        let len = self.max_exponent().map_or(0, |j| j as usize + 1);
        let mut coeffs = vec![BigRational::from_integer(0.into()); len];
        for (&j, &c) in &self.terms {
            coeffs[j as usize] = rational_from_f64(c)?;
        }
        Ok(RationalPoly::new(coeffs))
    }
}

/// `Φ^{(k)}` as a free function over an [`ExpPoly`].
pub fn exp_poly_derivative(phi: &ExpPoly, k: u32) -> ExpPoly {
    phi.derivative(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_examples() {
        assert_eq!(exp_poly_derivative(&ExpPoly::new([(1, 2.0)]), 3), ExpPoly::new([(1, 2.0)]));
        assert_eq!(exp_poly_derivative(&ExpPoly::new([(2, 1.0)]), 2), ExpPoly::new([(2, 4.0)]));
        assert_eq!(
            exp_poly_derivative(&ExpPoly::new([(0, 5.0), (1, 1.0)]), 1),
            ExpPoly::new([(1, 1.0)])
        );
    }

    #[test]
    fn derivatives_at_matches_derivative() {
        let phi = ExpPoly::new([(0, 0.5), (1, -3.0), (2, 1.25), (3, 0.1)]);
        let t = 0.7;
        let vals = phi.derivatives_at(t, 4);
        for (k, v) in vals.iter().enumerate() {
            let direct = phi.derivative(k as u32).eval(t);
            assert!((v - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn zero_terms_dropped() {
        let phi = ExpPoly::new([(1, 1.0), (2, 0.0)]);
        assert_eq!(phi.terms().len(), 1);
        assert!(ExpPoly::new([(0, 3.0)]).is_constant());
    }
}
