use thiserror::Error;

use crate::model::validation::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid model:\n{0}")]
    InvalidModel(ValidationReport),

    #[error("unknown event {0:?}")]
    UnknownEvent(String),

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("unknown failure type {0:?}")]
    UnknownFailureType(String),

    #[error("event {event:?} does not qualify with respect to {sigma:?}")]
    NotQualifying { event: String, sigma: String },

    #[error("event {event:?} is not in the diagnoser alphabet for {sigma:?}")]
    NotObservable { event: String, sigma: String },

    #[error("assumption A2 violated for {sigma:?}: unobserved cycle {cycle}")]
    A2Violated { sigma: String, cycle: String },

    #[error("invalid bound: {0}")]
    InvalidBound(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
