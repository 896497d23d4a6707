//! Problem data, structural conditions and the critical thresholds.

mod domain;
mod functions;
mod problem;
mod table;
mod thresholds;
mod validate;

pub use domain::{DomainSpec, Point};
pub use functions::{
    FVariant, GVariant, GradientCoefSpec, InnerRegion, MuFieldSpec, NonlinearitySpec, SourceSpec,
};
pub use problem::{Condition, ProblemSpec};
pub use table::{Table, Tail};
pub use thresholds::{thresholds, two_star, Thresholds};
pub use validate::{s_grid, validate_spec, ConditionResult, ValidationReport, Witness};
