use std::fmt;

use serde::Serialize;

/// One violated well-formedness rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    ZeroDimension,
    NoEvents,
    VectorLength {
        state: String,
        expected: usize,
        found: usize,
    },
    MatrixShape {
        event: String,
        expected: usize,
    },
    UnknownInitial {
        initial: String,
    },
    DuplicateFailureType {
        name: String,
    },
    UnknownFailureDegree {
        event: String,
        failure_type: String,
    },
    MissingFailureDegree {
        event: String,
        failure_type: String,
    },
    DanglingTransition {
        source: String,
        event: String,
        target: String,
        missing: String,
    },
    Nondeterministic {
        source: String,
        event: String,
        targets: Vec<String>,
    },
    DuplicateTransition {
        source: String,
        event: String,
        target: String,
    },
    VectorInconsistent {
        source: String,
        event: String,
        target: String,
        expected: String,
        found: String,
    },
    FailureBound {
        event: String,
        failure_type: String,
        failure: String,
        bound: String,
    },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            ZeroDimension => write!(f, "dimension must be at least 1"),
            NoEvents => write!(f, "model declares no events"),
            VectorLength { state, expected, found } => {
                write!(f, "state {state}: vector has {found} entries, expected {expected}")
            }
            MatrixShape { event, expected } => write!(f, "event {event}: matrix is not {expected}x{expected}"),
            UnknownInitial { initial } => write!(f, "initial state {initial} is not declared"),
            DuplicateFailureType { name } => write!(f, "failure type {name} declared twice"),
            UnknownFailureDegree { event, failure_type } => {
                write!(f, "event {event}: degree given for undeclared failure type {failure_type}")
            }
            MissingFailureDegree { event, failure_type } => {
                write!(f, "event {event}: no degree for failure type {failure_type}")
            }
            DanglingTransition { source, event, target, missing } => {
                write!(f, "transition ({source}, {event}, {target}): {missing} is not declared")
            }
            Nondeterministic { source, event, targets } => {
                write!(f, "transition ({source}, {event}) has several targets: {}", targets.join(", "))
            }
            DuplicateTransition { source, event, target } => {
                write!(f, "transition ({source}, {event}, {target}) listed twice")
            }
            VectorInconsistent { source, event, target, expected, found } => write!(
                f,
                "edge ({source}, {event}) -> {target}: vector is {found} but max-min composition gives {expected}"
            ),
            FailureBound { event, failure_type, failure, bound } => write!(
                f,
                "event {event}: failure degree {failure} for {failure_type} exceeds unobservability {bound}"
            ),
        }
    }
}

/// Every violated rule of a model; empty iff the model is well formed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn push(&mut self, issue: ValidationIssue) {
        self.issues.push(issue);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.issues.extend(other.issues);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "- {issue}")?;
        }
        Ok(())
    }
}
