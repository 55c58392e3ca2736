//! Continuation of the series solution into the regular region `t > 0`.

mod closed_form;
mod dopri;
mod integrate;
mod system;

pub use closed_form::{ClosedForm, Profile};
pub use dopri::{DenseSegment, Stats};
pub use integrate::{
    integrate, integrate_from, jet_state, FlowOptions, HandoffLog, Outcome, Trajectory,
    TrajectorySample,
};
pub use system::{
    first_integral_residual, rhs, soliton_residual, SolitonResidual, SolitonState, StateDerivative,
};
