//! Fourier transform of the curve measure over the reals and the certified constant `C`.

mod certify;
mod decompose;
mod quad;
mod window;

pub use certify::{
    certified_constant_real, classify_frequency, frequency_certificate, interval_budget,
    vdc_bound, CaseBreakdown, CertifiedBound, FrequencyCase, FrequencyCertificate,
};
pub use decompose::{
    merge_intervals, superlevel_decompose, IntervalDecomposition, MergedInterval,
    WitnessInterval,
};
pub use quad::{
    mu_hat_of_phase, mu_hat_real, mu_hat_real_estimate, oscillatory_integral, MuHat, OscIntegral,
    DEFAULT_TOL, MAX_PANELS,
};
pub use window::{Window, MAX_EXPONENT};

/// `{t : |Φ^{(k)}(t)| >= η}` on the window, split at the roots of `Φ''`.
pub fn derivative_level_set(
    phi: &crate::polycore::ExpPoly,
    k: u32,
    eta: f64,
    window: &Window,
) -> crate::error::Result<IntervalDecomposition> {
    let g = phi.base_poly()?;
    let cut = decompose::derivative_poly(&g, 2);
    let intervals = decompose::level_set(&decompose::derivative_poly(&g, k), eta, &cut, window, k)?;
    Ok(IntervalDecomposition { intervals })
}
