use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("content requires n >= 2, got n = {0}")]
    TooSmall(usize),
    #[error("cycle length k = {k} is out of range for n = {n}")]
    BadK { k: usize, n: usize },
    #[error("n = {0} is out of range for this operation")]
    BadN(usize),
    #[error("indices must satisfy 1 <= i < j <= n (got i = {i}, j = {j}, n = {n})")]
    BadIndices { i: usize, j: usize, n: usize },
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    TooLarge { n: usize, bound: usize },
    #[error("brute force needs {needed} product evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("the number of steps must be at least 1")]
    BadSteps,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),
    #[error("unknown statistic: {0}")]
    UnknownStatistic(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
