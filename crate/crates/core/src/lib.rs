//! Pseudo-spectral simulation and verification tools for the nonlocal
//! transport equation `∂_t u + ∂_x arctan(Hu/u) = 0` on the circle, its
//! viscous regularization, a porous-medium variant and the CCCF model
//! `∂_t g + Λg = ∂_x(g Hg)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod spectral;
pub mod theory;

pub use error::{Error, Result};
