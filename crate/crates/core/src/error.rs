use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The exact accumulator of the alternating sum outgrew its bit budget.
    #[error("alternating sum for ({m},{n}) needs {bits} bits, budget is {budget}")]
    OverflowBeyondRange {
        m: usize,
        n: usize,
        bits: u64,
        budget: u64,
    },

    #[error("{what} did not converge: {detail}")]
    NonConvergent { what: &'static str, detail: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degenerate instants: {0}")]
    DegenerateInstants(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
