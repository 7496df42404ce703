use std::collections::BTreeSet;

use thiserror::Error;

use crate::Var;

/// Errors produced by parsing and solving.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {0} is not in the hypergraph")]
    UnknownVertex(Var),

    #[error("hypergraph is not beta-acyclic; residual vertices without a nest point: {}", fmt_witness(.witness))]
    NotBetaAcyclic { witness: BTreeSet<Var> },

    #[error("variable {0} is not a nest point of the current instance")]
    NotANestPoint(Var),

    #[error("elimination order violated: expected {expected:?}, got {got}")]
    OrderViolation { expected: Option<Var>, got: Var },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("brute-force guard exceeded: {free} free variables (limit {limit})")]
    GuardExceeded { free: usize, limit: usize },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn fmt_witness(witness: &BTreeSet<Var>) -> String {
    let parts: Vec<String> = witness.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
