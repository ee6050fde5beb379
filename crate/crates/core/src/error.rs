use crate::dyadic::DyadicIndex;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument `{name}` out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("dyadic index out of range: level {level}, position {position}")]
    InvalidIndex { level: u32, position: u64 },

    #[error("amplitude at {index} lies at or below the expansion depth {depth}")]
    AmplitudeBeyondDepth { index: DyadicIndex, depth: u32 },

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: u32, right: u32 },

    #[error("depth {requested} exceeds the supported maximum {max}")]
    DepthTooLarge { requested: u32, max: u32 },

    #[error("polynomial has a root at the interval endpoint {endpoint}; perturb the endpoints")]
    EndpointRoot { endpoint: String },

    #[error("the zero polynomial has no finite root count")]
    ZeroPolynomial,

    #[error("candidate function returned {value} at (f={f}, F={big_f}, lambda={lambda}); expected a value in [0, 1]")]
    CandidateOutOfRange {
        value: f64,
        f: f64,
        big_f: f64,
        lambda: f64,
    },

    #[error("witness has S^2 < lambda on cell {cell} (lambda remaining {remaining})")]
    NotFullMeasure { cell: DyadicIndex, remaining: f64 },

    #[error("start point ({tau}, {axis}) lies outside the grid")]
    OutsideGrid { tau: f64, axis: f64 },
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
