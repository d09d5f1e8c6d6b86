//! Planar point configurations of diameter 2 and the squared product of
//! their pairwise distances, `Δ = ∏_{i≠j} |z_i − z_j|`.
//!
//! The crate builds the regular polygons and the diameter-push family
//! `z_k = (1 + δ_k)ω_k, z_{k+n/2} = −(1 − δ_k)ω_k`, solves for the largest
//! push that keeps the diameter at 2, expresses the push as the flow of a
//! radial vector field, and evaluates the double integral `I` whose sign
//! decides whether `Δ/nⁿ` stays above 1 as `n → ∞`.

pub mod constructions;
pub mod error;
pub mod experiments;
pub mod flow;
pub mod geometry;
pub mod profile;
pub mod quadrature;
pub mod solvers;
pub mod summation;

pub use constructions::{push_construction, regular_ngon, single_diameter_move, ConstructionSpec};
pub use error::{Error, Result};
pub use experiments::{
    extrapolate, run_sweep, CMode, ExtrapolationResult, SweepOptions, SweepRecord,
};
pub use flow::{flow_map, pair_statistics, power_sums, rho_matrix, vector_field_at, RhoMatrix};
pub use geometry::{
    diameter, log_discriminant, log_ratio, rescale_to_diameter, Configuration, Point2,
};
pub use profile::Profile;
pub use quadrature::{integral_i, limit_constant, QuadratureResult};
pub use solvers::{c_max, eps_max, t_max, BindingReport};
