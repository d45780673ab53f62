//! Exact polynomial arithmetic, root isolation and the curve-family constants.

mod exppoly;
mod family;
mod linalg;
mod poly;
mod rational;
mod roots;

pub use exppoly::{exp_poly_derivative, ExpPoly};
pub use family::{
    a0_may_be_minus_infinity, check_independence, compute_a0_real, constant_pairing,
    high_freq_constants, high_frequency_betas, low_frequency_alphas, phi_from_frequency,
    CurveFamily, HighFreqConstants, Independence,
};
pub use linalg::{
    charpoly, inverse, matmul, rank, solve, spectral_norm_upper, transpose,
    vandermonde_interpolation, Matrix,
};
pub use poly::RationalPoly;
pub use rational::{
    format_rational, int_valuation, lower_f64, parse_rational, rational_from_f64, rational_pow,
    upper_f64, valuation,
};
pub use roots::{
    cauchy_root_bound, isolate_positive_roots, isolate_roots_in, refine_root, RootEnclosure,
    RootInterval, SturmSequence, ROOT_WIDTH,
};
