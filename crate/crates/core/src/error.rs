use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node index {index} out of range for graph with {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) already present")]
    EdgeExists(usize, usize),
    #[error("edge ({0}, {1}) not present")]
    EdgeMissing(usize, usize),
    #[error("graph has no edges")]
    EmptyEdgeSet,
    #[error("node {0} is isolated (degree 0)")]
    IsolatedNode(usize),
    #[error("edge endpoint {0} is isolated (degree 0)")]
    IsolatedEndpoint(usize),
    #[error("matrix is not symmetric (|a_ij - a_ji| = {0:e})")]
    NotSymmetric(f64),
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("spectrum sums to {0}, expected 1")]
    NotNormalized(f64),
    #[error("invalid parameter: {0}")]
    BadParam(String),
    #[error("graph is complete, no absent edges remain")]
    GraphComplete,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("no reachable node pairs")]
    NoPairs,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("zero variance")]
    ZeroVariance,
    #[error("need at least {needed} candidate edges, found {found}")]
    TooFewCandidates { needed: usize, found: usize },
    #[error("degenerate ratio: denominator {0:e} is not positive")]
    DegenerateRatio(f64),
    #[error("window ending at {end} out of range (window {window}, {available} return periods)")]
    WindowOutOfRange {
        end: usize,
        window: usize,
        available: usize,
    },
    #[error("series too short: {periods} return periods for window {window}")]
    TooShort { periods: usize, window: usize },
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("non-positive price {value} for asset {asset} at row {row}")]
    NonPositivePrice {
        asset: String,
        row: usize,
        value: f64,
    },
    #[error("ragged CSV: row {row} has {found} fields, expected {expected}")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("inconsistent incremental state: {0}")]
    InconsistentState(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable code, used in CLI error JSON and null-reason fields.
    pub fn code(&self) -> &'static str {
        match self {
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::SelfLoop(_) => "SelfLoop",
            Error::EdgeExists(..) => "EdgeExists",
            Error::EdgeMissing(..) => "EdgeMissing",
            Error::EmptyEdgeSet => "EmptyEdgeSet",
            Error::IsolatedNode(_) => "IsolatedNode",
            Error::IsolatedEndpoint(_) => "IsolatedEndpoint",
            Error::NotSymmetric(_) => "NotSymmetric",
            Error::NoConvergence => "NoConvergence",
            Error::NotNormalized(_) => "NotNormalized",
            Error::BadParam(_) => "BadParam",
            Error::GraphComplete => "GraphComplete",
            Error::Disconnected => "Disconnected",
            Error::NoPairs => "NoPairs",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::ZeroVariance => "ZeroVariance",
            Error::TooFewCandidates { .. } => "TooFewCandidates",
            Error::DegenerateRatio(_) => "DegenerateRatio",
            Error::WindowOutOfRange { .. } => "WindowOutOfRange",
            Error::TooShort { .. } => "TooShort",
            Error::MalformedCsv(_) => "MalformedCsv",
            Error::NonPositivePrice { .. } => "NonPositivePrice",
            Error::RaggedRows { .. } => "RaggedRows",
            Error::Parse { .. } => "Parse",
            Error::InconsistentState(_) => "InconsistentState",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
