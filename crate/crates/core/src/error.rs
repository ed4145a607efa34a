use thiserror::Error;

use crate::vertex::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("oracle symmetry violated: {to} is a neighbor of {from} but not conversely")]
    Asymmetric { from: VertexId, to: VertexId },

    #[error("vertex {vertex} has {degree} neighbors, exceeding the degree bound {bound}")]
    DegreeExceeded {
        vertex: VertexId,
        degree: usize,
        bound: usize,
    },

    #[error("invalid vertex {vertex}: {reason}")]
    InvalidVertex { vertex: VertexId, reason: String },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("geodesic audit failed: d(x_{m}, x_{n}) = {found}, expected {expected}")]
    GeodesicAudit {
        m: i64,
        n: i64,
        found: String,
        expected: u64,
    },

    #[error("distance between {u} and {v} exceeds cap {cap}; rerun with a larger cap")]
    AboveCap { u: VertexId, v: VertexId, cap: u32 },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("no threshold found below ceiling {ceiling}")]
    ThresholdCeiling { ceiling: u64 },

    #[error("chain construction failed at k = {k}: {reason}")]
    Chain { k: i64, reason: String },

    #[error("tree embedding audit failed on pair ({u}, {v}): d_Y = {d_y}, d_T = {d_t}")]
    TreeEmbedding {
        u: VertexId,
        v: VertexId,
        d_y: u32,
        d_t: String,
    },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
