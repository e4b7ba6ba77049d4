use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("need 1 <= N_a < N_t, got N_t={n_t}, N_a={n_a}")]
    AntennaCounts { n_t: usize, n_a: usize },
    #[error("constellation order {0} is not a supported power of two")]
    ConstellationOrder(usize),
    #[error("bit word has length {got}, expected {expected}")]
    BitLength { expected: usize, got: usize },
    #[error("support is not a legal spatial pattern")]
    IllegalSupport,
    #[error("correlation coefficient {0} outside [0, 1)")]
    Correlation(f64),
    #[error("group size must be at least 1")]
    GroupSize,
    #[error("slot {slot} outside 0..{group}")]
    Slot { slot: usize, group: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("ML search over {required} hypotheses exceeds budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("order statistic needs at least two competitors, got {0}")]
    TooFewCompetitors(usize),
    #[error("analysis is restricted to a single active antenna, got N_a={0}")]
    AnalysisScope(usize),
    #[error("invalid parameter: {0}")]
    Parameter(&'static str),
    #[error("quadrature did not converge, achieved tolerance {achieved:e}")]
    NotConverged { achieved: f64 },
}
