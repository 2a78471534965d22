use thiserror::Error;

use crate::state::Representation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid qudit system: n = {n}, d = {d} ({reason})")]
    InvalidSystem { n: usize, d: usize, reason: &'static str },

    #[error("system mismatch: (n = {left_n}, d = {left_d}) vs (n = {right_n}, d = {right_d})")]
    SystemMismatch {
        left_n: usize,
        left_d: usize,
        right_n: usize,
        right_d: usize,
    },

    #[error("label has {got} digits, system has {expected} qudits")]
    LabelLength { expected: usize, got: usize },

    #[error("digit {digit} at position {position} is outside [0, {d})")]
    DigitOutOfRange { position: usize, digit: usize, d: usize },

    #[error("index {index} is outside [0, {dim})")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("expected {expected} amplitudes, got {got}")]
    AmplitudeLength { expected: usize, got: usize },

    #[error("state is not normalized: squared norm {norm_sqr} deviates from 1 by {deviation:e}")]
    NotNormalized { norm_sqr: f64, deviation: f64 },

    #[error("representation mismatch: expected {expected}, got {got}")]
    RepresentationMismatch {
        expected: Representation,
        got: Representation,
    },

    #[error("local dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("wire {wire} is outside [0, {n})")]
    WireOutOfRange { wire: usize, n: usize },

    #[error("gate reuses wire {wire}")]
    WireClash { wire: usize },

    #[error("gate parameter {value} is outside [0, {d})")]
    ParameterOutOfRange { value: usize, d: usize },

    #[error("matrix is {rows}x{cols}, expected {d}x{d}")]
    MatrixShape { rows: usize, cols: usize, d: usize },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("dense oracle needs dimension {dim}, cap is {cap}")]
    OracleCap { dim: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
