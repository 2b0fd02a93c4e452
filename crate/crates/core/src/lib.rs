//! Fuzzy discrete event systems: max-min models, observability-based
//! diagnosers and F_i-diagnosability checking.
//!
//! ```
//! use fdes_core::{Diagnoser, FdesModel};
//!
//! let json = r#"{
//!   "dimension": 1,
//!   "states": {"q0": ["1"]},
//!   "initial": "q0",
//!   "events": {"a": {"matrix": [["1"]], "observability": "1"}},
//!   "failure_types": [],
//!   "transitions": [["q0", "a", "q0"]]
//! }"#;
//! let model = FdesModel::from_json(json).unwrap();
//! let a = model.event_id("a").unwrap();
//! let d = Diagnoser::build(&model, a).unwrap();
//! assert_eq!(d.state_count(), 1);
//! ```

pub mod diagnoser;
pub mod error;
mod graph;
pub mod model;
pub mod par;
pub mod possibility;
pub mod verdict;

pub use diagnoser::{Certainty, Diagnoser, DiagnoserState, IndeterminateCycle, LabelSet};
pub use error::{Error, Result};
pub use model::validation::{ValidationIssue, ValidationReport};
pub use model::{
    A2Check, A2Status, DegreeProfile, EventId, FailureTypeId, FdesModel, ModelDocument, StateId,
    Trace,
};
pub use par::Execution;
pub use possibility::{EventMatrix, FuzzyStateVec, PossDegree};
pub use verdict::{OracleBounds, OracleOutcome, SigmaVerdict, VerdictReport};
