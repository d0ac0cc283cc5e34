use std::path::PathBuf;

use crate::Vertex;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed triple file: {0}")]
    TripleFile(String),

    #[error("({0}, {1}, {2}) is not a Pythagorean triple with a < b < c")]
    NotATriple(u64, u64, u64),

    #[error("edge {0:?} does not have three distinct vertices")]
    DegenerateEdge([Vertex; 3]),

    #[error("edge {0:?} uses a vertex outside the vertex set")]
    EdgeOutsideVertexSet([Vertex; 3]),

    #[error("vertex {0} is not in the system")]
    UnknownVertex(Vertex),

    #[error("{0:?} is not an edge of the system")]
    UnknownEdge([Vertex; 3]),

    #[error("not a Steiner triple system: {0}")]
    NotSteiner(String),

    #[error("invalid bicycle: {0}")]
    InvalidBicycle(String),

    #[error("unsupported search parameters: {0}")]
    Search(String),

    #[error("DIMACS parse error on line {line}: {msg}")]
    Dimacs { line: usize, msg: String },

    #[error("invalid CNF document: {0}")]
    Cnf(String),

    #[error("invalid split: {0}")]
    Split(String),

    #[error("model does not assign variable {0}")]
    IncompleteModel(u32),

    #[error("colouring is invalid on the reduced system: edge {0:?} is not bichromatic")]
    InvalidColoring([Vertex; 3]),

    #[error("solver configuration error: {0}")]
    SolverConfig(String),

    #[error("split plan error: {0}")]
    Plan(String),

    #[error("campaign error: {0}")]
    Campaign(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
