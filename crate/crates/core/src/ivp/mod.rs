//! Formal power-series solution at the singular orbit.
//!
//! Writing `x(t) = Σ x_m t^m/m!`, the order-`t^m` part of the metric
//! equation is affine in `x_{m+2}` with linear part proportional to `𝓛_m`,
//! and the order-`t^m` part of the first integral is affine in `u_{m+3}`
//! with linear part proportional to `𝓛̃_m`. The recursion alternates the
//! two, so each step reads only coefficients fixed by earlier steps.

mod data;
mod equations;
#[cfg(feature = "exact")]
mod exact;
mod operators;
mod solve;

pub use data::InitialData;
pub use equations::{tt_equation, u_equation, x_equation};
#[cfg(feature = "exact")]
pub use exact::{solve_series_exact, ExactJet};
pub use operators::{
    build_lm, build_lm_fd, build_ltilde, kernel_basis, simple_pole_part, singular_part,
    OperatorMatrix, KERNEL_TOL,
};
pub use solve::{
    check_initial_conditions, compute_d, contact_orders, solve_series, ContactOrders,
    FreeParameter, InitialConditionReport, OrderResidual, SeriesSolution,
};

#[cfg(test)]
mod tests;
