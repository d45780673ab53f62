//! Combinatorial companions: configurations in dense sets, clique bounds and explicit colorings.

mod boxset;
mod clique;
mod coloring;
mod multivar;

pub use boxset::{config_search, upper_density_estimate, AxisBox, BoxSet, ConfigOutcome, DensityEstimate};
pub use clique::{
    bezout_clique_data, clique_search, parabola_triangle_forces_degenerate, to_f64_point, BezoutData, CliqueInstance,
    CliqueResult, CurveOracle, CURVE_TOL,
};
pub use coloring::{coloring_threshold, periodic_color, periodic_coloring_verify, ColoringReport, ColoringThreshold};
pub use multivar::{multivariate_reduce, MultiPoly};
