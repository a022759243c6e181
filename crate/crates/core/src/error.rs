use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("field of order {order} exceeds the limit {limit}")]
    FieldTooLarge { order: u64, limit: u64 },
    #[error("polynomial {0} is not a primitive modulus")]
    InvalidModulus(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("zero vector has no projective representative")]
    ZeroVector,
    #[error("parity-check matrix is zero")]
    ZeroMatrix,
    #[error("parity-check column {0} is zero")]
    ZeroColumn(usize),
    #[error("{space} has {size} elements, above the limit {limit}")]
    SizeGuard { space: &'static str, size: u64, limit: u64 },
    #[error("{param} = {value} out of range: {constraint}")]
    OutOfRange { param: &'static str, value: i64, constraint: String },
    #[error("code has no block structure")]
    MissingBlocks,
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("columns {0} and {1} are projectively equal")]
    RepeatedColumn(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
