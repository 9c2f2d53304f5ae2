use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alpha must lie in (-inf, 1), got {0}")]
    AlphaOutOfRange(f64),

    #[error("invalid model parameters: {0}")]
    InvalidParameters(String),

    #[error("weight index (n = {n}, k = {k}) lies outside the triangle 1 <= k <= n")]
    OutOfTriangle { n: usize, k: usize },

    #[error("k = {k} exceeds the model's capacity of {capacity} classes")]
    CapacityExceeded { k: usize, capacity: usize },

    #[error("weight table covers n <= {max_n}, but V({n}, .) was requested")]
    WeightTableExhausted { n: usize, max_n: usize },

    #[error("invalid weight table: {0}")]
    InvalidWeights(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("invalid counts vector: {0}")]
    InvalidCounts(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("conditioning event has zero probability: {0}")]
    ZeroProbability(String),

    #[error("enumeration size n = {n} exceeds the guard of {guard} (override with GIBBS_MAX_N)")]
    OracleGuard { n: usize, guard: usize },

    #[error("enumerated total mass {0} deviates from 1")]
    OracleMass(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
