//! JSON model file schema.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::possibility::PossDegree;

/// Raw, unchecked contents of a model file.
///
/// Degrees are decimal strings with at most three fractional digits; JSON
/// numbers are rejected so no value ever passes through a float.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub dimension: usize,
    pub states: IndexMap<String, Vec<PossDegree>>,
    pub initial: String,
    pub events: IndexMap<String, EventDocument>,
    pub failure_types: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDocument {
    pub matrix: Vec<Vec<PossDegree>>,
    pub observability: PossDegree,
    #[serde(default)]
    pub failures: IndexMap<String, PossDegree>,
}

impl ModelDocument {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|source| Error::Parse {
            line: source.line(),
            column: source.column(),
            message: source.to_string(),
        })
    }

    pub fn to_json_pretty(&self) -> String {
        // Only strings, arrays and maps: serialization cannot fail.
        serde_json::to_string_pretty(self).expect("model document serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "dimension": 1,
        "states": {"a": ["1"]},
        "initial": "a",
        "events": {"e": {"matrix": [["1"]], "observability": "1", "failures": {}}},
        "failure_types": [],
        "transitions": [["a", "e", "a"]]
    }"#;

    #[test]
    fn parses_minimal_document() {
        let doc = ModelDocument::from_json(MINIMAL).unwrap();
        assert_eq!(doc.dimension, 1);
        assert_eq!(doc.transitions, vec![("a".into(), "e".into(), "a".into())]);
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = MINIMAL.replace("\"initial\"", "\"colour\": 1, \"initial\"");
        let err = ModelDocument::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
    }

    #[test]
    fn rejects_numeric_and_overprecise_degrees() {
        let numeric = MINIMAL.replace("\"observability\": \"1\"", "\"observability\": 1.0");
        assert!(ModelDocument::from_json(&numeric).is_err());
        let precise = MINIMAL.replace("\"observability\": \"1\"", "\"observability\": \"0.1234\"");
        let err = ModelDocument::from_json(&precise).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 5);
                assert!(message.contains("three fractional digits"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
