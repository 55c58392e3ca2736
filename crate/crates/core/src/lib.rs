//! Cohomogeneity-one gradient Ricci solitons near a singular orbit.
//!
//! The crate solves `Ric(g) + Hess(u) + (ε/2) g = 0` for metrics of the form
//! `dt² + t² x₊(t) ⊕ x₋(t)` on a tubular neighbourhood of a singular orbit
//! `Q = G/H`, where the principal orbit is `G/K` and `H/K` is a sphere `S^k`.
//!
//! The pipeline is:
//!
//! 1. [`geometry`]: Lie-algebra skeleton of `(G, H, K)` and curvature of
//!    diagonal invariant metrics on the principal orbit.
//! 2. [`series`]: truncated Taylor/Laurent arithmetic, including the Laurent
//!    expansion of the Ricci endomorphism of `t² x₊ ⊕ x₋`.
//! 3. [`ivp`]: the order-by-order power-series recursion at `t = 0`.
//! 4. [`flow`]: continuation of the jet by an adaptive Runge–Kutta integrator
//!    with first-integral and soliton residual certificates.
//! 5. [`indeterminacy`]: kernel dimensions of the recursion operators.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod flow;
pub mod geometry;
pub mod indeterminacy;
pub mod ivp;
pub mod linalg;
pub mod series;

pub use error::{Error, Result};
pub use geometry::{Block, DiagonalTensor, GeometrySpec, SummandSpec};
