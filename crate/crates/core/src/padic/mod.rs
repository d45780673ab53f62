//! `p`-adic counterpart: Tate characters, exact sphere integrals and the certified floor.

mod cyclo;
mod integral;
mod reduce;
mod scalar;

pub use cyclo::CycloSum;
pub use integral::{
    ball_integral, combined_phase, mu_hat_padic, mu_hat_padic_exact, padic_vdc_check, sphere_character_sum,
    sphere_character_sum_exact, sphere_integral, sphere_measure, PadicMuHat, VdcCheck,
};
pub use reduce::{
    certified_bound_padic, echelon_reduce, ess_part, lambda_lattice, lattice_axis, padic_a0, valuation_label,
    Echelon, PadicCertifiedBound, PadicWindow, SphereSpec, LATTICE_VALUATIONS,
};
pub use scalar::{tate_character, tate_character_rational, PadicScalar};
