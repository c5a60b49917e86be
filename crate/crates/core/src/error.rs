//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FourierError {
    #[error("coefficient vector for max frequency {max_freq} needs {expected} entries, got {got}")]
    CoefficientCount {
        max_freq: i64,
        expected: usize,
        got: usize,
    },
    #[error("{requested} grid points cannot resolve max frequency {max_freq}; need at least {required}")]
    ResolutionTooLow {
        max_freq: i64,
        required: usize,
        requested: usize,
    },
    #[error("negative max frequency {0}")]
    NegativeMaxFreq(i64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("operator max frequencies differ: {left} vs {right}")]
    SizeMismatch { left: i64, right: i64 },
    #[error("series bandwidth {series} exceeds operator max frequency {operator}")]
    BandwidthExceeded { series: i64, operator: i64 },
    #[error("symbol vanishes at frequency {freq}; inverse multiplier undefined")]
    ZeroSymbol { freq: i64 },
    #[error("empty operator combination")]
    EmptyCombination,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("frequency triple ({a}, {b}, {c}) needs pairwise sums within operator bandwidth {max_freq}")]
    TripleOutOfRange { a: i64, b: i64, c: i64, max_freq: i64 },
    #[error("coboundary density m0 must be real-valued")]
    DensityNotReal,
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObstructionError {
    #[error("kernel classification needs n_max >= 2, got {0}")]
    NMaxTooSmall(u32),
    #[error("pairing frequencies ({a}, {b}, {c}) exceed matrix bandwidth {max_freq}")]
    PairingOutOfRange { a: i64, b: i64, c: i64, max_freq: i64 },
    #[error("leading-term fit needs at least {required} distinct frequencies with |r| >= 2, got {got}")]
    TooFewSamples { required: usize, got: usize },
    #[error("degenerate fit: sampled values fit degree {fitted} (< expected {expected}) and m0 is constant")]
    DegenerateFit { expected: usize, fitted: i64 },
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("invalid flow parameter: {0}")]
    InvalidParameter(String),
    #[error("solution became non-finite at t = {time}")]
    Unstable { time: f64 },
    #[error("characteristic fixed point failed to converge at t = {time}; wave likely broken")]
    CharacteristicsDiverged { time: f64 },
    #[error(transparent)]
    Fourier(#[from] FourierError),
}
