//! Numerical lab for the Dirichlet problem
//! `-Δu + g(x,u)|∇u|² = λ f(u) + t u^σ` on radial balls and annuli (N ≥ 3)
//! and on rectangles (2D).
//!
//! The crate is organised bottom-up: [`model`] holds problem data and
//! structural conditions, [`mesh`] the discrete operators, [`linalg`] the
//! linear solvers, [`nonlinear`] Newton, fixed-point and continuation
//! drivers, [`transforms`] the changes of unknown, [`checks`] the executable
//! verdicts and [`experiment`] the batch layer used by the command line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod mesh;
pub mod model;
pub mod nonlinear;
pub mod par;
pub mod quad;
pub mod transforms;

pub use error::{Error, Result};
