use thiserror::Error;

use crate::prob::ExperimentTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two events (or an event and an experiment) come from different random
    /// experiments. Evidence about one experiment's event is never evidence
    /// about another's, so the operation is refused.
    #[error("tag mismatch: event from {found} used with {expected}")]
    TagMismatch {
        expected: ExperimentTag,
        found: ExperimentTag,
    },

    #[error("conditioning event has probability zero")]
    ZeroCondition,

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("unknown outcome {label:?} in experiment {experiment}")]
    UnknownOutcome {
        label: String,
        experiment: ExperimentTag,
    },

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}
