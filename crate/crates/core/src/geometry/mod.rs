//! Homogeneous-space data for the principal orbit `G/K` and curvature of
//! diagonal invariant metrics on it.

mod builtin;
mod casimir;
mod ricci;
mod spec;
mod tensor;
mod validate;

pub use builtin::{
    circle, grassmann_product, so_geometry, sphere, stiefel, stiefel_codim2, torus, Pair,
};
pub use casimir::{
    casimir_on_diagonals, casimir_spectrum, end_casimir_matrix, p_minus_casimir_matrix,
};
pub use ricci::{ricci_endomorphism, ricci_form, shape_divergence, Monomial, RicciTables};
pub use spec::{Block, Bracket, GeometrySpec, SummandSpec};
pub use tensor::DiagonalTensor;
pub use validate::{validate_geometry, CheckResult, ValidationReport};
