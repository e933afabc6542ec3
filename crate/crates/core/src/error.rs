use thiserror::Error;

use crate::geometry::NodeId;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("bounding box must have strictly positive width and height")]
    InvalidBoundingBox,
    #[error("site {index} lies outside the bounding box")]
    OutsideBoundingBox { index: NodeId },
    #[error("sites {first} and {second} are coincident")]
    DuplicateSite { first: NodeId, second: NodeId },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("node id {id} is out of range for a network of {n} nodes")]
    InvalidNodeId { id: NodeId, n: usize },
    #[error("expected {expected} readings, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("no records to summarize")]
    EmptyInput,
    #[error("no records for a network of {n} nodes")]
    EmptyAfterFilter { n: usize },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
