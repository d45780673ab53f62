use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{compute_a0_real, CurveFamily};

/// Largest `n·T` accepted, keeping `e^{nT}` and its derivatives inside `f64` range.
pub const MAX_EXPONENT: f64 = 600.0;

/// Integration window `[a, T]` in the logarithmic variable `t = ln s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Window {
    pub a: f64,
    pub t: f64,
}

impl Window {
    pub fn new(a: f64, t: f64) -> Result<Self> {
        if !a.is_finite() || !t.is_finite() {
            return Err(Error::InvalidWindow(format!("non-finite endpoints ({a}, {t})")));
        }
        if t <= a {
            return Err(Error::InvalidWindow(format!("need T > a, got a = {a}, T = {t}")));
        }
        Ok(Self { a, t })
    }

    pub fn length(&self) -> f64 {
        self.t - self.a
    }

    /// Checks `a > a_0` and that `e^{nT}` stays representable.
    pub fn validate_for(&self, family: &CurveFamily) -> Result<()> {
        let a0 = compute_a0_real(family);
        if self.a <= a0 {
            return Err(Error::InvalidWindow(format!(
                "need a > a_0 = {a0}, got a = {}",
                self.a
            )));
        }
        self.check_range(family.n() as u32)
    }

    pub(crate) fn check_range(&self, n: u32) -> Result<()> {
        let top = n as f64 * self.t.abs().max(self.a.abs());
        if top > MAX_EXPONENT {
            return Err(Error::InvalidWindow(format!(
                "n·T = {top} exceeds {MAX_EXPONENT}; e^(nT) is not representable"
            )));
        }
        Ok(())
    }
}
