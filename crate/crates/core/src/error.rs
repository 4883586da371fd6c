use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("expected {expected} tokens, found {found}")]
    TokenCount { expected: String, found: usize },
    #[error("invalid token `{token}`: {reason}")]
    BadToken { token: String, reason: String },
    #[error("target `{token}` out of range 0..{limit}")]
    OutOfRange { token: String, limit: usize },
    #[error("vertex {vertex} targets itself")]
    Tadpole { vertex: usize },
    #[error("vertex {vertex} has a repeated target {target}")]
    DoubleEdge { vertex: usize, target: usize },
    #[error("bracket form must contain exactly one three-target group, found {found}")]
    TripleCount { found: usize },
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<ParseError>,
    },
    #[error("{0}")]
    Syntax(String),
}

impl ParseError {
    pub fn at_line(self, line: usize) -> Self {
        ParseError::Line {
            line,
            source: Box::new(self),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("sink counts differ: {0} vs {1}")]
    SinkMismatch(usize, usize),
    #[error("conflicting weights for {key}: {first} vs {second}")]
    ConflictingWeight {
        key: String,
        first: String,
        second: String,
    },
    #[error("graph {key} is not admissible at order {order}")]
    Inadmissible { key: String, order: usize },
    #[error("weight table does not cover order {0}")]
    MissingOrder(usize),
    #[error("slot {slot} out of range for a graph with {sinks} sinks")]
    SlotOutOfRange { slot: usize, sinks: usize },
    #[error("linear system is inconsistent in block {block}")]
    Inconsistent { block: String },
    #[error("c_n is not consistent across basis elements: {0} vs {1}")]
    InconsistentCn(String, String),
    #[error("no weighted basis element to extract c_n from")]
    NoWeightedSupport,
    #[error("solution is nonzero on {0}, which has no weight")]
    UncoveredSupport(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
