use std::path::PathBuf;

use thiserror::Error;

use crate::complex::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric input: {0}")]
    InvalidInput(String),

    #[error("vertex {vertex} out of range for a space with {n_vertices} vertices")]
    VertexOutOfRange { vertex: u64, n_vertices: usize },

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),

    #[error("missing edge ({0}, {1}): pair is not a stored distance")]
    MissingEdge(VertexId, VertexId),

    #[error("capacity overflow: {what} needs {size} which exceeds the 64-bit index width")]
    CapacityOverflow { what: &'static str, size: u128 },

    #[error("simplex budget exceeded: {projected} simplices projected, budget is {budget}")]
    BudgetExceeded { projected: u128, budget: u128 },

    #[error("recursion budget of {budget} expansions exceeded while computing V for simplex {simplex}")]
    RecursionBudget { simplex: u64, budget: usize },

    #[error("simplex {0} is not a birth simplex (its reduced column is non-zero)")]
    NotABirth(u64),

    #[error("perturbation calibration failed after {m_max} halvings")]
    CalibrationFailed { m_max: u32 },

    #[error("graphical sampling acceptance rate collapsed: {accepted} accepted out of {attempts} draws")]
    AcceptanceCollapse { accepted: usize, attempts: usize },

    #[error("empty sample bank")]
    EmptyBank,

    #[error("unmapped vertex {0}")]
    UnmappedVertex(VertexId),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error on {path:?}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
