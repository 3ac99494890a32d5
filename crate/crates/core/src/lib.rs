//! Spectral order on tuples of commuting Hermitian matrices.
//!
//! A tuple `A` precedes `B` when `F_B(x) ≤ F_A(x)` for every `x ∈ R^κ`, where
//! `F_A(x) = E_A((-∞, x])` is the projection-valued distribution function of
//! the joint spectral measure.

// `!(x >= 0.0)` style guards are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod order;
pub mod random;
pub mod resolution;
pub mod spectral;

pub use error::{Error, Result};
