use thiserror::Error;

/// Errors produced anywhere in the discretization pipeline.
#[derive(Debug, Error)]
pub enum VemError {
    #[error("degenerate cell {cell}: {reason}")]
    DegenerateCell { cell: usize, reason: String },

    #[error("mesh generation failed: {0}")]
    GenerationFailure(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("triangulation failed: {0}")]
    TriangulationFailure(String),

    #[error("singular projector on cell {cell} (condition estimate {cond:.3e})")]
    SingularProjector { cell: usize, cond: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("problem `{0}` carries no exact solution")]
    MissingExact(String),

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, VemError>;
