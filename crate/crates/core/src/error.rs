use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: i128, modulus: u64 },

    #[error("root {root} of {value} modulo {prime} does not lift (singular point)")]
    NonLiftable { root: u64, value: i128, prime: u64 },

    #[error("prime {p} divides delta = {delta}")]
    PrimeDividesDelta { p: u64, delta: u64 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("enumeration needs {needed} pair operations, budget is {budget}; use the sieved variant")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("collision construction does not apply to {0}")]
    ConstructionInapplicable(String),

    #[error("modulus {m} lies outside the window [{n}, {upper}) for n = {n}")]
    OutOfWindow { n: u64, m: u64, upper: u64 },

    #[error("unknown suite id `{0}`")]
    UnknownSuite(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
