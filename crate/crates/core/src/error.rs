use thiserror::Error;

use crate::graph::StructuralError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    Structural(Vec<StructuralError>),
    #[error("malformed orientation: {0}")]
    Orientation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("instance too large: {edges} edges exceeds the limit of {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error("invalid formula: {0}")]
    Formula(String),
    #[error("parse error: {0}")]
    Parse(String),
}

fn join(errs: &[StructuralError]) -> String {
    errs.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
