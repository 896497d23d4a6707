//! Changes of unknown as invertible node-wise maps between problem specs.
//!
//! Every transform returns a [`TransformedProblem`]: the new spec, the map
//! carrying solutions of the original problem to solutions of the new one,
//! and a metadata block. Transformed nonlinearities are materialized as
//! Hermite tables with exact slopes, so transformed specs serialize like any
//! other spec and cost the same to evaluate.

mod blowup;
mod gamma;
mod map;
mod psi;
mod sample;
mod semilinear;
mod truncate;

pub use blowup::{blowup_rescale, BlowupProfile, WINDOW_HALF_WIDTH, WINDOW_POINTS};
pub use gamma::{gamma_transform, GammaScale};
pub use map::{FieldMap, TransformMeta, TransformedProblem};
pub(crate) use psi::psi_on_grid;
pub use psi::{psi_forward, psi_inverse, PsiParams};
pub use semilinear::{power_transform_check, semilinearize, PowerDefect, INTERIOR_BAND};
pub use truncate::{truncate_at_delta, truncate_at_s0};
