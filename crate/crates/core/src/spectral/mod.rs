//! Hoffman-type bounds and the search for `inf μ̂_T` that feeds them.

mod hoffman;
mod minimize;
mod pipeline;

pub use hoffman::{hoffman_chromatic_bound, hoffman_ratio_bound, operator_ratio_bound};
pub use minimize::{minimize_mu_hat, Domain, GridSpec, MinimizationReport, MinimizeOptions, Sample, TraceEntry};
pub use pipeline::{independence_pipeline, PipelineResult};
