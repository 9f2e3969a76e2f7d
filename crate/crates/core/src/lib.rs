//! Range-adherent Laplace mechanism.
//!
//! The Laplace density is truncated to the feasible range of a query,
//! renormalized, and given a scale that keeps the mechanism differentially
//! private despite the location-dependent normalization. A brute-force
//! verifier checks the density-ratio guarantee on a grid.

pub mod cli;
pub mod constraints;
pub mod error;
pub mod laplace;
pub mod mechanism;
pub mod plan;
pub mod rng;
pub mod single_infinite;
pub mod special_functions;
pub mod uniform;
pub mod verifier;

pub use constraints::{
    classify, feasible_spans, location_view, normalize_config, reflect, ConfigClass,
    ConstraintConfig, Interval, LocationView, PrivacyParams, Span,
};
pub use error::{Error, Result};
pub use mechanism::TruncatedLaplace;
pub use plan::{FixedScale, ScaleSchedule, SigmaPlan};
pub use single_infinite::SingleInfinitePlan;
pub use uniform::{optimal_uniform_sigma, UniformPlan};
