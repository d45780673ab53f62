use num_traits::ToPrimitive;
use serde::Serialize;

use super::hoffman::{hoffman_chromatic_bound, hoffman_ratio_bound};
use super::minimize::{minimize_mu_hat, Domain, MinimizationReport, MinimizeOptions};
use crate::error::{Error, Result};
use crate::padic::certified_bound_padic;
use crate::polycore::CurveFamily;
use crate::realosc::certified_constant_real;

/// Certified and empirical bounds for one family and window.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineResult {
    pub domain: Domain,
    /// `C` (real) or `16 Σ p^{deg f'_i}` (p-adic).
    pub certified_constant: f64,
    /// The certified lower bound on `μ̂_T`: `-C/(T-a)` or `-16 Σ p^{deg f'_i} / L`.
    pub certified_floor: f64,
    /// Upper bound on the independence ratio.
    pub certified_ratio_bound: f64,
    /// Lower bound on the Borel chromatic number.
    pub chromatic_lower_bound: f64,
    pub empirical_minimum: f64,
    /// `-m̂/(1-m̂)`; absent when no negative value was found.
    pub empirical_ratio_bound: Option<f64>,
    pub minimization: MinimizationReport,
}

/// Runs the certificate and the search, and checks that the search respects the floor.
pub fn independence_pipeline(family: &CurveFamily, domain: &Domain, options: &MinimizeOptions) -> Result<PipelineResult> {
    family.require_independent()?;
    let (constant, floor, ratio, chromatic) = match domain {
        Domain::Real(w) => {
            w.validate_for(family)?;
            let c = certified_constant_real(family)?.c;
            let len = w.length();
            (c, -c / len, c / len, len / c)
        }
        Domain::Padic(w) => {
            let b = certified_bound_padic(family, w)?;
            let floor = b.floor_rational().to_f64().unwrap_or(f64::NEG_INFINITY);
            (
                b.constant as f64,
                floor,
                hoffman_ratio_bound(floor)?,
                hoffman_chromatic_bound(floor, 1.0)?,
            )
        }
    };
    let report = minimize_mu_hat(family, domain, options)?;
    let slack = match domain {
        Domain::Real(_) => 1e-6 + report.best_error,
        Domain::Padic(_) => 0.0,
    };
    if report.best_value < floor - slack {
        return Err(Error::Consistency(format!(
            "empirical minimum {} at λ = {:?} is below the certified floor {} (family {:?}, domain {:?})",
            report.best_value,
            report.best_lambda,
            floor,
            family.to_strings(),
            domain
        )));
    }
    let empirical_ratio_bound = (report.best_value < 0.0)
        .then(|| hoffman_ratio_bound(report.best_value))
        .transpose()?;
    Ok(PipelineResult {
        domain: *domain,
        certified_constant: constant,
        certified_floor: floor,
        certified_ratio_bound: ratio,
        chromatic_lower_bound: chromatic,
        empirical_minimum: report.best_value,
        empirical_ratio_bound,
        minimization: report,
    })
}
