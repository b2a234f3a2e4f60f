//! Weighted nonlinear least squares and the registry of temperature-law
//! models used by all analysis pipelines.

mod compare;
mod dataset;
mod engine;
mod models;

pub use compare::{compare_models, power_law_exponent, ComparisonEntry, ComparisonReport};
pub use dataset::{DataPoint, Dataset};
pub use engine::{fit_model, fit_weighted_linear_basis, FitOptions, FitResult};
pub use models::{build_model, Model, ModelContext, ModelId};
