use thiserror::Error;

/// Errors raised by the simulator's library surface.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("bit sequence contains a non-binary value {0}")]
    NonBinary(u8),
    #[error("QPSK needs an even number of bits, got {0}")]
    OddLength(usize),
    #[error("noise variance must be positive and finite, got {0}")]
    InvalidNoiseVariance(f64),
    #[error("block of {got} bits is shorter than the {need}-bit minimum")]
    TooShort { need: usize, got: usize },
    #[error("{what} index {index} is out of range (valid: {valid})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        valid: &'static str,
    },
    #[error("cannot fit {tb_size} information bits into {g} coded bits")]
    UncodeableRate { tb_size: usize, g: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("soft buffer has not received any deposit")]
    EmptyBuffer,
    #[error("resource grid carries no DMRS cells")]
    MissingDmrs,
    #[error("phase table has no row for group {0}")]
    MissingTableRow(usize),
    #[error("malformed phase table: {0}")]
    PhaseTable(String),
    #[error("no interleaver exists for block length {0}")]
    NoInterleaver(usize),
    #[error("SINR grids differ between reports")]
    GridMismatch,
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
