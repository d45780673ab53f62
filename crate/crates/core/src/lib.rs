//! Fourier transforms of measures on polynomial curves over the reals and the p-adics,
//! certified lower bounds for them, and the spectral bounds they imply for Cayley graphs.

// negated float comparisons are deliberate: they reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cayleylab;
pub mod error;
pub mod padic;
pub mod polycore;
pub mod realosc;
pub mod spectral;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
