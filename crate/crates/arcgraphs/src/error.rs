use thiserror::Error;

/// Errors reported by the library. Input problems carry enough context
/// to name the violated condition.
#[derive(Debug, Error)]
pub enum Error {
    #[error("no ideal triangulation: {reason}")]
    NoTriangulation { reason: String },

    #[error("edge {edge} is not flippable: both sides lie on triangle {tri}")]
    NotFlippable { edge: usize, tri: usize },

    #[error("matching condition violated in triangle {tri}: {detail}")]
    Matching { tri: usize, detail: String },

    #[error("empty or inessential system")]
    Inessential,

    #[error("coordinate vector has wrong length: expected {expected}, got {got}")]
    CoordLength { expected: usize, got: usize },

    #[error("reference triangulation mismatch")]
    ReferenceMismatch,

    #[error("arc is not in graph kind {kind}: endpoints ({a}, {b})")]
    KindMismatch { kind: String, a: String, b: String },

    #[error("unknown puncture label: {0}")]
    UnknownPuncture(String),

    #[error("marked puncture {puncture} is not isolated in the exhaustion (opens at stage {stage}); such inputs are rejected")]
    UnstableMarkedPuncture { puncture: String, stage: u32 },

    #[error("invalid stage transition script: {0}")]
    BadScript(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("subsurface frame invalid: {0}")]
    BadFrame(String),

    #[error("search did not terminate within {limit} steps: {what}")]
    SearchLimit { what: String, limit: usize },

    #[error("unknown export format: {0}")]
    UnknownFormat(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    /// Exit code classification for the CLI: 2 for input errors, 1 for
    /// invariant failures discovered while computing.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::SearchLimit { .. })
    }
}
