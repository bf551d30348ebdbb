use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("model has no entries")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("entry ({row}, {col}) = {value} is negative")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("total mass {sum} deviates from 1")]
    MassNotOne { sum: f64 },
    #[error("at least two classes are required, got {k}")]
    TooFewClasses { k: usize },
    #[error("observation {x} has zero marginal probability")]
    ZeroMarginal { x: usize },
    #[error("classifier has length {got}, model has {expected} observations")]
    LengthMismatch { expected: usize, got: usize },
    #[error("label {label} at observation {x} is not below k = {k}")]
    BadLabel { x: usize, label: usize, k: usize },
    #[error("search space of size {size} exceeds the limit {limit}")]
    TooLarge { size: u128, limit: u128 },
    #[error("delta = {delta} is outside [0, {max}]")]
    OutOfRange { delta: f64, max: f64 },
    #[error("entropy {h} is outside [0, ln {k}]")]
    EntropyOutOfRange { h: f64, k: usize },
    #[error("entropy {h} is negative")]
    NegativeEntropy { h: f64 },
    #[error("Rényi order must be positive and finite, got {beta}")]
    BadBeta { beta: f64 },
    #[error("profile is not a probability vector: {reason}")]
    BadProfile { reason: &'static str },
    #[error("weights are not a positive probability vector")]
    BadWeights,
    #[error("entry {x} is not a permutation of 0..{k}")]
    BadPermutation { x: usize, k: usize },
    #[error("bad parameter: {0}")]
    BadParam(&'static str),
    #[error("parameters outside the family domain: {0}")]
    OutOfDomain(&'static str),
}
