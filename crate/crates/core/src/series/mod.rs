//! Truncated Taylor/Laurent series in `t` with scalar or diagonal-tensor
//! coefficients.

mod coeff;
mod ricci;
mod scalar;
mod tensor;

#[cfg(feature = "exact")]
pub use coeff::Rational;
pub use coeff::{Algebra, Coeff};
pub use ricci::{laurent_split, ricci_series, ricci_series_with, singular_ricci};
pub use scalar::ScalarSeries;
pub use tensor::TensorSeries;
