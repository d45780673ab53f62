use crate::error::{Error, Result};

/// Hoffman bound `ᾱ <= -m / (1 - m)` for a symmetric probability measure with `m = inf μ̂ < 0`.
pub fn hoffman_ratio_bound(m_val: f64) -> Result<f64> {
    if !(m_val < 0.0) || !m_val.is_finite() {
        return Err(Error::Hypothesis(format!("need m < 0, got {m_val}")));
    }
    Ok(-m_val / (1.0 - m_val))
}

/// `(-m + 2ε) / (R - m - ε)`, valid when `R - m - ε > 0`.
pub fn operator_ratio_bound(m_val: f64, r: f64, eps: f64) -> Result<f64> {
    let den = r - m_val - eps;
    if !(den > 0.0) || !den.is_finite() || !(eps >= 0.0) {
        return Err(Error::Hypothesis(format!(
            "need R - m - ε > 0 and ε >= 0, got R = {r}, m = {m_val}, ε = {eps}"
        )));
    }
    Ok((-m_val + 2.0 * eps) / den)
}

/// `χ >= 1 - M/m` for `m < 0 < M`.
pub fn hoffman_chromatic_bound(m_val: f64, big_m: f64) -> Result<f64> {
    if !(m_val < 0.0) || !(big_m > 0.0) || !m_val.is_finite() || !big_m.is_finite() {
        return Err(Error::Hypothesis(format!(
            "need m < 0 < M, got m = {m_val}, M = {big_m}"
        )));
    }
    Ok(1.0 - big_m / m_val)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!((hoffman_ratio_bound(-1.0 / 3.0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(hoffman_ratio_bound(-1.0).unwrap(), 0.5);
        assert!((hoffman_ratio_bound(-1e-9).unwrap() - 1e-9).abs() < 1e-17);
        assert!(hoffman_ratio_bound(0.0).is_err());
        assert!(hoffman_ratio_bound(f64::NAN).is_err());
        assert!((operator_ratio_bound(-0.5, 1.0, 0.1).unwrap() - 0.5).abs() < 1e-15);
        assert!((operator_ratio_bound(-0.5, 0.4, 0.2).unwrap() - 0.9 / 0.7).abs() < 1e-15);
        assert!(operator_ratio_bound(-0.5, 0.1, 0.7).is_err());
        assert!((hoffman_chromatic_bound(-1.0 / 3.0, 1.0).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(hoffman_chromatic_bound(-1.0, 1.0).unwrap(), 2.0);
        assert!((hoffman_chromatic_bound(-0.1, 1.0).unwrap() - 11.0).abs() < 1e-14);
        assert!(hoffman_chromatic_bound(0.1, 1.0).is_err());
        assert!(hoffman_chromatic_bound(-0.1, 0.0).is_err());
    }

    #[test]
    fn operator_reduces_to_hoffman() {
        for m in [-1.0 / 3.0, -0.7, -1e-4, -2.5] {
            assert_eq!(operator_ratio_bound(m, 1.0, 0.0).unwrap(), hoffman_ratio_bound(m).unwrap());
        }
    }
}
