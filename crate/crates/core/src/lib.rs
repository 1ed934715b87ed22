//! Approximation of maps from a box in R^n into a Riemannian manifold by
//! blending single tangent space models fitted at several anchor points.

// NaN-rejecting checks are written as `!(x > 0.0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod clustering;
pub mod error;
pub mod geometry;
pub mod interp;
pub mod linalg;
pub mod mean;
pub mod models;
pub mod samples;
