//! Exact `p`-adic oscillatory integrals `∫ ψ(h(s)) ds` over balls and spheres.
//!
//! A ball `c + p^k ℤ_p` is rescaled to `ℤ_p`, giving `H(u) = h(c + p^k u) = Σ d_i u^i`.
//! Then, recursively:
//!
//! * if every `d_i` with `i >= 1` is `p`-integral, `ψ(H)` is the constant `ψ(d_0)`;
//! * if `v(d_1) < 0` and `v(d_1) < v(d_i)` for all `i >= 2`, the integral vanishes:
//!   translating `u` by `p^{-v(d_1)-1}` multiplies the integrand by the nontrivial
//!   constant `ψ(d_1 p^{-v(d_1)-1})` and leaves the integral unchanged;
//! * otherwise `ℤ_p` splits into the `p` balls `a + pℤ_p`.
//!
//! The recursion terminates because the coefficients of degree `i >= 1` gain
//! `i` in valuation per level. Leaves contribute roots of unity with rational weights,
//! collected in a [`CycloSum`].

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::cyclo::CycloSum;
use super::reduce::PadicWindow;
use super::scalar::{character_exponent, require_prime, PadicScalar};
use crate::error::{Error, Result};
use crate::polycore::{rational_pow, valuation, CurveFamily, RationalPoly};

const MAX_DEPTH: u32 = 128;

fn zp_integral(h: &RationalPoly, p: u64, weight: &BigRational, depth: u32, out: &mut CycloSum) -> Result<()> {
    let vals: Vec<Option<i64>> = h.coeffs().iter().skip(1).map(|c| valuation(c, p)).collect();
    if vals.iter().all(|v| v.is_none_or(|v| v >= 0)) {
        let (r, n) = character_exponent(&h.coeff(0), p);
        out.add_root(&r, n, weight.clone());
        return Ok(());
    }
    if let Some(Some(v1)) = vals.first() {
        if *v1 < 0 && vals[1..].iter().all(|v| v.is_none_or(|v| v > *v1)) {
            return Ok(());
        }
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Precision(format!(
            "ball recursion exceeded depth {MAX_DEPTH}"
        )));
    }
    let pq = BigRational::from_integer(p.into());
    let w = weight / &pq;
    for a in 0..p {
        let child = h
            .taylor_shift(&BigRational::from_integer(a.into()))
            .scale_argument(&pq);
        zp_integral(&child, p, &w, depth + 1, out)?;
    }
    Ok(())
}

/// `∫_{c + p^k ℤ_p} ψ(h(s)) ds` exactly (Haar measure with `|ℤ_p| = 1`).
pub fn ball_integral(h: &RationalPoly, c: &BigRational, k: i64, p: u64) -> Result<CycloSum> {
    require_prime(p)?;
    let scaled = h.taylor_shift(c).scale_argument(&rational_pow(p, k));
    let mut out = CycloSum::zero(p);
    zp_integral(&scaled, p, &rational_pow(p, -k), 0, &mut out)?;
    Ok(out)
}

/// `∫_{C_r} ψ(h(s)) ds` over the sphere `‖s‖_p = p^r`, exactly.
pub fn sphere_integral(h: &RationalPoly, r: i64, p: u64) -> Result<CycloSum> {
    let zero = BigRational::zero();
    let mut out = ball_integral(h, &zero, -r, p)?;
    out.sub_assign(&ball_integral(h, &zero, -(r - 1), p)?);
    Ok(out)
}

/// Checks that replacing `λ` by its stored representative does not change `ψ(λ f(s))`
/// for `‖s‖_p <= p^radius`.
fn check_representative(lambda: &PadicScalar, f: &RationalPoly, radius: i64) -> Result<()> {
    let Some(v) = lambda.valuation() else {
        return Ok(());
    };
    let p = lambda.p();
    let worst = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(j, a)| valuation(a, p).map(|va| va - j as i64 * radius))
        .min();
    match worst {
        Some(w) if v + lambda.precision() as i64 + w < 0 => Err(Error::Precision(format!(
            "λ known to {} digits is too coarse for spheres of radius {}^{}",
            lambda.precision(),
            p,
            radius
        ))),
        _ => Ok(()),
    }
}

/// `∫_{C_r} ψ(λ f(s)) ds`.
pub fn sphere_character_sum(f: &RationalPoly, lambda: &PadicScalar, r: i64) -> Result<Complex64> {
    sphere_character_sum_exact(f, lambda, r).map(|s| s.to_complex())
}

/// Exact form of [`sphere_character_sum`].
pub fn sphere_character_sum_exact(f: &RationalPoly, lambda: &PadicScalar, r: i64) -> Result<CycloSum> {
    if f.degree().unwrap_or(0) < 1 {
        return Err(Error::InvalidArgument("sphere sums need deg f >= 1".into()));
    }
    check_representative(lambda, f, r)?;
    let h = f.scale(&lambda.representative());
    sphere_integral(&h, r, lambda.p())
}

/// `μ̂_T(λ)` over `ℚ_p`: exact cyclotomic value plus its float rendering.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicMuHat {
    pub value: f64,
    /// Present when the value is rational (always the case for `λ = 0`).
    pub exact: Option<BigRational>,
    pub sum: CycloSum,
}

/// `λ · F = Σ λ_i f_i` as one polynomial.
pub fn combined_phase(family: &CurveFamily, lambda: &[BigRational]) -> Result<RationalPoly> {
    if lambda.len() != family.m() {
        return Err(Error::DimensionMismatch {
            expected: family.m(),
            got: lambda.len(),
        });
    }
    Ok(family
        .polys()
        .iter()
        .zip(lambda)
        .fold(RationalPoly::zero(), |acc, (f, l)| &acc + &f.scale(l)))
}

/// `μ̂_T(λ) = (1/L) Σ_{r=a}^{T} p^{-r} · 2 Re ∫_{C_r} ψ(λ·F(s)) ds` for exact rational `λ`.
pub fn mu_hat_padic_exact(family: &CurveFamily, window: &PadicWindow, lambda: &[BigRational]) -> Result<PadicMuHat> {
    window.validate_for(family)?;
    let p = window.p;
    let h = combined_phase(family, lambda)?;
    let zero = BigRational::zero();
    // balls p^{-k} ℤ_p for k = a-1..T, shared by neighbouring spheres
    let balls: Vec<CycloSum> = (window.a - 1..=window.t)
        .map(|k| ball_integral(&h, &zero, -k, p))
        .collect::<Result<_>>()?;
    let mut total = CycloSum::zero(p);
    for (i, r) in (window.a..=window.t).enumerate() {
        let mut sphere = balls[i + 1].clone();
        sphere.sub_assign(&balls[i]);
        let mut term = sphere.twice_real_part();
        term.scale(&rational_pow(p, -r));
        total.add_assign(&term);
    }
    total.scale(&window.normalization().recip());
    total.reduce();
    let exact = total.as_rational();
    let value = match &exact {
        Some(q) => num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN),
        None => total.to_complex().re,
    };
    Ok(PadicMuHat {
        value,
        exact,
        sum: total,
    })
}

/// [`mu_hat_padic_exact`] for `λ` given as `p`-adic scalars.
pub fn mu_hat_padic(family: &CurveFamily, window: &PadicWindow, lambda: &[PadicScalar]) -> Result<PadicMuHat> {
    if lambda.len() != family.m() {
        return Err(Error::DimensionMismatch {
            expected: family.m(),
            got: lambda.len(),
        });
    }
    for (l, f) in lambda.iter().zip(family.polys()) {
        if l.p() != window.p {
            return Err(Error::InvalidArgument(format!(
                "λ over Q_{} used with window over Q_{}",
                l.p(),
                window.p
            )));
        }
        check_representative(l, f, window.t)?;
    }
    let reps: Vec<BigRational> = lambda.iter().map(PadicScalar::representative).collect();
    mu_hat_padic_exact(family, window, &reps)
}

/// Outcome of [`padic_vdc_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VdcCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Compares `|∫_{p^r ℤ_p} ψ(λ f(s)) ds|` with `2p^n / ‖λ a_n‖_p^{1/n}`.
pub fn padic_vdc_check(f: &RationalPoly, lambda: &PadicScalar, r: i64) -> Result<VdcCheck> {
    let p = lambda.p();
    let n = f.degree().unwrap_or(0);
    if n < 1 {
        return Err(Error::InvalidArgument("van der Corput needs deg f >= 1".into()));
    }
    let lead = f.leading().expect("nonzero") * lambda.representative();
    let Some(v) = valuation(&lead, p) else {
        return Err(Error::InvalidArgument("leading coefficient of λf vanishes".into()));
    };
    check_representative(lambda, f, -r)?;
    let h = f.scale(&lambda.representative());
    let lhs = ball_integral(&h, &BigRational::zero(), r, p)?.to_complex().norm();
    let rhs = 2.0 * (p as f64).powi(n as i32) * (p as f64).powf(v as f64 / n as f64);
    Ok(VdcCheck {
        lhs,
        rhs,
        ok: lhs <= rhs + 1e-9,
    })
}

/// `p^{-r}`-weighted sphere mass used by `μ̂(0)`: `p^r - p^{r-1}`.
pub fn sphere_measure(p: u64, r: i64) -> BigRational {
    rational_pow(p, r) - rational_pow(p, r - 1)
}
