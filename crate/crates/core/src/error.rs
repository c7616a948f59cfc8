use alloc::boxed::Box;
use alloc::string::String;

use crate::completion::CompletionTrace;
use crate::tameness::BalancedWitness;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the zero vector does not define a ray")]
    ZeroVector,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),
    #[error("cone is not full-dimensional: {0}")]
    NotFullDimensional(String),
    #[error("region is not {m}-tame; balanced witness {witness}")]
    NotTame { m: usize, witness: BalancedWitness },
    #[error("no separating hemisphere: {0}")]
    NoSeparator(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("completion did not certify within {cap} steps")]
    IterationCap { cap: usize, trace: Box<CompletionTrace> },
}
