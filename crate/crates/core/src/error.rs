use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("truncated body: header declares {declared} facets, file holds {found}")]
    TruncatedBody { declared: u32, found: usize },
    #[error("ascii stl parse error on line {line}: {message}")]
    AsciiParse { line: usize, message: String },
    #[error("stl contains no triangles")]
    NoTriangles,
    #[error("mesh is empty")]
    EmptyMesh,
    #[error("non-finite vertex coordinate in facet {facet}")]
    NonFinite { facet: usize },
}

/// Base-slice segments that did not close into loops.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{} dangling endpoints: open contour chain (mesh not watertight at this height)", dangling.len())]
pub struct ChainError {
    /// Welded-vertex edge keys of the unmatched chain ends.
    pub dangling: Vec<(u32, u32)>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("slice {index} at z={z}: {source}")]
    Chain {
        index: usize,
        z: f64,
        #[source]
        source: ChainError,
    },
    #[error("coordinate {0} mm is outside the snapping range")]
    OutOfRange(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrimitiveError {
    #[error("non-finite polytope coordinates")]
    NonFinite,
    #[error("chord tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}
