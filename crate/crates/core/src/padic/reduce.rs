use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::scalar::require_prime;
use crate::error::{Error, Result};
use crate::polycore::{format_rational, rational_pow, valuation, CurveFamily, Matrix, RationalPoly};

/// The sphere `C_r = {‖s‖_p = p^r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SphereSpec {
    pub r: i64,
}

impl SphereSpec {
    /// `|C_r| = p^r - p^{r-1}`.
    pub fn measure(&self, p: u64) -> BigRational {
        rational_pow(p, self.r) - rational_pow(p, self.r - 1)
    }
}

/// Radii `a..=T` over `ℚ_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PadicWindow {
    pub p: u64,
    pub a: i64,
    pub t: i64,
}

impl PadicWindow {
    pub fn new(p: u64, a: i64, t: i64) -> Result<Self> {
        require_prime(p)?;
        if t <= a {
            return Err(Error::InvalidWindow(format!("need T > a, got a = {a}, T = {t}")));
        }
        if t - a > 64 || a.abs() > 1 << 20 || t.abs() > 1 << 20 {
            return Err(Error::InvalidWindow(format!("radii {a}..{t} out of range")));
        }
        Ok(Self { p, a, t })
    }

    /// `L = 2(T - a + 1)(1 - 1/p)`.
    pub fn normalization(&self) -> BigRational {
        let p = BigInt::from(self.p);
        BigRational::from_integer(BigInt::from(2 * (self.t - self.a + 1)))
            * BigRational::new(&p - 1, p)
    }

    /// Requires `a > max_i Ess_{f_i}`.
    pub fn validate_for(&self, family: &CurveFamily) -> Result<()> {
        let a0 = padic_a0(family, self.p);
        if self.a <= a0 {
            return Err(Error::InvalidWindow(format!(
                "a = {} must exceed max Ess = {a0}",
                self.a
            )));
        }
        Ok(())
    }
}

/// `max{0, v(a_n) - v(a_i)}` over nonzero `a_i`, `i < n`.
pub fn ess_part(f: &RationalPoly, p: u64) -> Result<i64> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::InvalidArgument("Ess needs deg f >= 1".into())),
    };
    let vn = valuation(&f.coeff(n), p).expect("leading coefficient");
    Ok(f.coeffs()[..n]
        .iter()
        .filter_map(|a| valuation(a, p))
        .map(|vi| vn - vi)
        .fold(0, i64::max))
}

/// `a_0 = max_i Ess_{f_i}`.
pub fn padic_a0(family: &CurveFamily, p: u64) -> i64 {
    family
        .polys()
        .iter()
        .map(|f| ess_part(f, p).expect("family members are nonconstant"))
        .max()
        .unwrap_or(0)
}

/// Result of [`echelon_reduce`]: `B (f_1..f_m)ᵀ = (f'_1..f'_m)ᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon {
    pub b: Matrix,
    pub family: CurveFamily,
}

/// Exact elimination to strictly decreasing degrees `deg f'_1 > ... > deg f'_m >= 1`.
///
/// The elimination is over `ℚ`, so it does not depend on the prime.
pub fn echelon_reduce(family: &CurveFamily) -> Result<Echelon> {
    family.require_independent()?;
    let m = family.m();
    let mut rows: Vec<RationalPoly> = family.polys().to_vec();
    let mut b: Matrix = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let mut order = Vec::with_capacity(m);
    let mut open: Vec<usize> = (0..m).collect();
    for d in (1..=family.n()).rev() {
        let Some(pos) = open.iter().position(|&i| !rows[i].coeff(d).is_zero()) else {
            continue;
        };
        let piv = open.remove(pos);
        let lead = rows[piv].coeff(d);
        for &i in &open {
            let c = rows[i].coeff(d);
            if c.is_zero() {
                continue;
            }
            let factor = &c / &lead;
            rows[i] = &rows[i] - &rows[piv].scale(&factor);
            let sub: Vec<BigRational> = b[piv].iter().map(|x| x * &factor).collect();
            for (x, s) in b[i].iter_mut().zip(sub) {
                *x -= s;
            }
        }
        order.push(piv);
    }
    if !open.is_empty() {
        return Err(Error::IndependenceViolation {
            rank: order.len() + 1,
            expected: m + 1,
        });
    }
    let polys = order.iter().map(|&i| rows[i].clone()).collect();
    let b = order.iter().map(|&i| b[i].clone()).collect();
    Ok(Echelon {
        b,
        family: CurveFamily::new(polys)?,
    })
}

/// The floor `μ̂_T(λ) >= -16 Σ p^{deg f'_i} / L` for every `λ`.
#[derive(Clone, Debug, Serialize)]
pub struct PadicCertifiedBound {
    pub p: u64,
    /// `16 Σ p^{deg f'_i}` for the echelon-reduced family.
    pub constant: u64,
    pub normalization: String,
    pub floor: String,
    pub floor_value: f64,
    pub reduced_degrees: Vec<usize>,
    pub reduction: Vec<Vec<String>>,
    pub reduced_family: Vec<Vec<String>>,
    /// `max Ess` over the original and the reduced family.
    pub a0: i64,
}

impl PadicCertifiedBound {
    pub fn floor_rational(&self) -> BigRational {
        crate::polycore::parse_rational(&self.floor).expect("formatted by us")
    }
}

/// Certifies the floor for `family` on `window`.
///
/// `λ·F = λ'·F'` with `λ = Bᵀλ'` is a bijection of frequencies, so the floor proved for
/// the reduced family `F' = BF` holds for `F` itself.
pub fn certified_bound_padic(family: &CurveFamily, window: &PadicWindow) -> Result<PadicCertifiedBound> {
    let ech = echelon_reduce(family)?;
    let p = window.p;
    let a0 = padic_a0(family, p).max(padic_a0(&ech.family, p));
    if window.a <= a0 {
        return Err(Error::InvalidWindow(format!(
            "a = {} must exceed max Ess = {a0} of the family and its reduction",
            window.a
        )));
    }
    let degrees = ech.family.degrees();
    let constant = degrees
        .iter()
        .try_fold(0u64, |acc, &d| {
            p.checked_pow(d as u32)
                .and_then(|x| x.checked_mul(16))
                .and_then(|x| acc.checked_add(x))
        })
        .ok_or_else(|| Error::InvalidArgument("constant overflows u64".into()))?;
    let l = window.normalization();
    let floor = -BigRational::from_integer(constant.into()) / &l;
    Ok(PadicCertifiedBound {
        p,
        constant,
        normalization: format_rational(&l),
        floor: format_rational(&floor),
        floor_value: floor.to_f64().unwrap_or(f64::NAN),
        reduced_degrees: degrees,
        reduction: ech.b.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
        reduced_family: ech.family.to_strings(),
        a0,
    })
}

/// Valuations enumerated per coordinate of the `λ` lattice.
pub const LATTICE_VALUATIONS: std::ops::RangeInclusive<i64> = -6..=2;

/// One coordinate of the `λ` lattice: `0` and `p^v u` for `v ∈ [-6, 2]`, `0 < u < p²`, `p ∤ u`.
pub fn lattice_axis(p: u64) -> Vec<BigRational> {
    let units: Vec<u64> = (1..p * p).filter(|u| u % p != 0).collect();
    let mut out = vec![BigRational::zero()];
    for v in LATTICE_VALUATIONS {
        for &u in &units {
            out.push(BigRational::from_integer(u.into()) * rational_pow(p, v));
        }
    }
    out
}

/// The full lattice `axis^m`, in lexicographic order.
pub fn lambda_lattice(p: u64, m: usize) -> Vec<Vec<BigRational>> {
    let axis = lattice_axis(p);
    let mut out: Vec<Vec<BigRational>> = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// `v(λ)` rendered for CSV tables (`inf` for zero).
pub fn valuation_label(x: &BigRational, p: u64) -> String {
    valuation(x, p).map_or_else(|| "inf".to_string(), |v| v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(i64, i64)]) -> RationalPoly {
        RationalPoly::new(c.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    #[test]
    fn ess_examples() {
        assert_eq!(ess_part(&poly(&[(0, 1), (3, 1), (1, 1)]), 3).unwrap(), 0);
        assert_eq!(ess_part(&poly(&[(0, 1), (1, 3), (1, 1)]), 3).unwrap(), 1);
        assert_eq!(ess_part(&RationalPoly::from_i64(&[0, 0, 0, 1]), 5).unwrap(), 0);
        assert!(ess_part(&RationalPoly::from_i64(&[4]), 5).is_err());
    }

    #[test]
    fn echelon_examples() {
        let f = CurveFamily::from_i64(&[&[0, 0, 1], &[0, 1]]).unwrap();
        let e = echelon_reduce(&f).unwrap();
        assert_eq!(e.family, f);
        let g = CurveFamily::from_i64(&[&[0, 1, 1], &[0, 0, 1]]).unwrap();
        let e = echelon_reduce(&g).unwrap();
        assert_eq!(e.family.degrees(), vec![2, 1]);
        let h = CurveFamily::from_i64(&[&[1, 1], &[0, 0, 1]]).unwrap();
        let e = echelon_reduce(&h).unwrap();
        assert_eq!(e.family.degrees(), vec![2, 1]);
        assert_eq!(e.family.polys()[1], RationalPoly::from_i64(&[1, 1]));
        let bad = CurveFamily::from_i64(&[&[0, 1], &[1, 2]]).unwrap();
        assert!(matches!(echelon_reduce(&bad), Err(Error::IndependenceViolation { .. })));
    }

    #[test]
    fn echelon_matrix_maps_family() {
        let g = CurveFamily::from_i64(&[&[0, 1, 2, 1], &[0, 3, 2], &[1, 0, 1, 2]]).unwrap();
        let e = echelon_reduce(&g).unwrap();
        let degs = e.family.degrees();
        assert!(degs.windows(2).all(|w| w[0] > w[1]));
        for (row, out) in e.b.iter().zip(e.family.polys()) {
            let combo = row
                .iter()
                .zip(g.polys())
                .fold(RationalPoly::zero(), |acc, (c, f)| &acc + &f.scale(c));
            assert_eq!(&combo, out);
        }
    }

    #[test]
    fn bound_examples() {
        let f = CurveFamily::from_i64(&[&[0, 0, 1], &[0, 1]]).unwrap();
        let w = PadicWindow::new(3, 1, 4).unwrap();
        let b = certified_bound_padic(&f, &w).unwrap();
        assert_eq!(b.constant, 192);
        assert_eq!(b.floor_rational(), BigRational::from_integer((-36).into()));
        let g = CurveFamily::from_i64(&[&[0, 0, 0, 1], &[0, 1]]).unwrap();
        let b = certified_bound_padic(&g, &PadicWindow::new(2, 1, 3).unwrap()).unwrap();
        assert_eq!(b.constant, 160);
        let w12 = PadicWindow::new(3, 1, 2).unwrap();
        assert_eq!(w12.normalization(), BigRational::new(8.into(), 3.into()));
    }

    #[test]
    fn window_checks() {
        assert!(PadicWindow::new(4, 1, 2).is_err());
        assert!(PadicWindow::new(3, 2, 2).is_err());
        let f = RationalPoly::new(vec![BigRational::zero(), BigRational::new(1.into(), 9.into()), BigRational::one()]);
        let fam = CurveFamily::new(vec![f, RationalPoly::from_i64(&[0, 1])]).unwrap();
        assert!(PadicWindow::new(3, 2, 4).unwrap().validate_for(&fam).is_err());
        assert!(PadicWindow::new(3, 3, 4).unwrap().validate_for(&fam).is_ok());
        assert_eq!(SphereSpec { r: 2 }.measure(3), BigRational::from_integer(6.into()));
    }

    #[test]
    fn lattice_size() {
        assert_eq!(lattice_axis(3).len(), 55);
        assert_eq!(lambda_lattice(3, 2).len(), 55 * 55);
        assert_eq!(lattice_axis(2).len(), 9 * 2 + 1);
    }
}
