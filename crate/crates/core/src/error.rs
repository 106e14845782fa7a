use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    OutOfRange { vertex: u32, n: u32 },
    #[error("edge {edge:?} repeats a vertex")]
    DegenerateEdge { edge: [u32; 3] },
    #[error("pair index {index} out of range ({pairs} pairs)")]
    BadPairIndex { index: usize, pairs: usize },
    #[error("universe mismatch: expected {expected}, got {got}")]
    UniverseMismatch { expected: usize, got: usize },
    #[error("q-density needs non-empty sides")]
    EmptySide,
    #[error("q must be positive, got {0}")]
    NonpositiveQ(f64),
    #[error("parameter {name} = {value} outside its range")]
    BadParam { name: &'static str, value: f64 },
    #[error("exact mode not available: {0}")]
    ModeTooLarge(&'static str),
    #[error("mode not supported here: {0}")]
    UnsupportedMode(&'static str),
    #[error("power iteration did not converge after {iterations} iterations (estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },
    #[error("hypergraph is not linear")]
    NotLinear,
    #[error("pattern too large: {0}")]
    PatternTooLarge(&'static str),
    #[error("oracle input too large: n = {n}, k = {k}")]
    OracleTooLarge { n: u32, k: usize },
    #[error("embedding count does not fit in 128 bits")]
    CountOverflow,
}
