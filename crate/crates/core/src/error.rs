use thiserror::Error;

use crate::natset::NatSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("the 0-fold sumset is undefined")]
    ZeroFoldSumset,

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("generators must be positive")]
    ZeroGenerator,

    #[error("generators must be strictly ascending")]
    UnsortedGenerators,

    #[error("gcd(generators) ≠ 1 (gcd is {0})")]
    GcdNotOne(u64),

    #[error("generator {0} is not minimal: it is a sum of the other generators")]
    NonMinimalGenerator(u64),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("support is empty")]
    EmptySupport,

    #[error("invalid group element: {0}")]
    InvalidElement(String),

    #[error("sequence does not sum to the identity")]
    NotZeroSum,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("{what} exceeds the configured limit {limit}")]
    HorizonExceeded { what: String, limit: u64 },

    #[error("family is not subadditive: {left} + {right} is contained in no member")]
    NotSubadditive { left: NatSet, right: NatSet },

    #[error("family has ℘ = 0 (all members are ∅ or {{0}})")]
    ZeroWp,

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
