use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse ring spec `{0}`: {1}")]
    RingSpec(String, String),

    #[error("modulus {0} is reducible over GF({1})")]
    ReducibleModulus(String, u32),

    #[error("ring of size {size} exceeds the configured bound {bound}")]
    SizeBound { size: u64, bound: u64 },

    #[error("{what}: {needed} exceeds budget {budget}")]
    Budget { what: String, needed: u64, budget: u64 },

    #[error("ring {0} is not local")]
    NotLocal(String),

    #[error("{0} is not a unit")]
    NotUnit(String),

    #[error("invalid X_n generator: {0}")]
    InvalidTuple(String),

    #[error("coset section undefined for {0}")]
    Section(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("invalid homomorphism: {0}")]
    InvalidMap(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
