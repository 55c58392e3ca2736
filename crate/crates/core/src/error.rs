use alloc::string::String;
use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed geometry: {0}")]
    Structure(String),
    #[error(
        "Ricci endomorphism is not diagonal on the declared summands (max deviation {max_dev:e})"
    )]
    NonDiagonalRicci { max_dev: f64 },
    #[error("metric is singular: summand {summand} has value {value:e}")]
    SingularMetric { summand: usize, value: f64 },
    #[error("Casimir operator is not scalar on summand {summand} (deviation {max_dev:e})")]
    NonScalarCasimir { summand: usize, max_dev: f64 },
    #[error("series has zero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("Laurent series starts at t^{lead}, below t^-2")]
    LeadTooSingular { lead: i32 },
    #[error("series of t^{exponent} coefficient is not available (valid through t^{order})")]
    OutOfOrder { exponent: i32, order: i32 },
    #[error("t^-1 Ricci coefficient does not vanish (relative size {size:e})")]
    OddRicciTerm { size: f64 },
    #[error("invalid initial data: {0}")]
    InvalidData(String),
    #[error("initial condition violated: {quantity} = {value:e}")]
    InitialConditionViolated { quantity: String, value: f64 },
    #[error("consistency violated at order {order}: residual {residual:e}")]
    ConsistencyViolated { order: usize, residual: f64 },
    #[error("parity violated: odd u coefficient u_{order} = {value:e}")]
    ParityViolated { order: usize, value: f64 },
    #[error("time t = {t} is not in the regular region")]
    SingularTime { t: f64 },
    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("kernel persists at the scan limit m = {m_max}")]
    StabilizationNotReached { m_max: usize },
}
