//! The fuzzy discrete event system model.
//!
//! A model is a deterministic crisp skeleton (states and a partial transition
//! map) decorated with fuzzy state vectors, event matrices, an observability
//! degree per event and a failure degree per (event, failure type).

mod assumptions;
mod closure;
mod document;
mod language;
pub mod validation;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

pub use assumptions::{A2Check, A2Status};
pub use closure::SilentStep;
pub use document::{EventDocument, ModelDocument};
use validation::{ValidationIssue, ValidationReport};

use crate::error::{Error, Result};
use crate::possibility::{max_min_compose, EventMatrix, FuzzyStateVec, PossDegree};

macro_rules! index_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub struct $name(u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }

            pub(crate) fn from_index(i: usize) -> Self {
                $name(i as u32)
            }
        }
    };
}

index_id!(
    /// Crisp skeleton state.
    StateId
);
index_id!(
    /// Fuzzy event.
    EventId
);
index_id!(
    /// Failure type `f_i`.
    FailureTypeId
);

/// A finite event string; the empty trace is ε.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(Vec<EventId>);

impl Trace {
    pub fn new(events: Vec<EventId>) -> Self {
        Trace(events)
    }

    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn events(&self) -> &[EventId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<EventId> {
        self.0.last().copied()
    }

    pub fn push(&mut self, e: EventId) {
        self.0.push(e);
    }

    pub fn concat(&self, other: &Trace) -> Trace {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Trace(v)
    }

    pub fn into_inner(self) -> Vec<EventId> {
        self.0
    }
}

impl From<Vec<EventId>> for Trace {
    fn from(v: Vec<EventId>) -> Self {
        Trace(v)
    }
}

impl FromIterator<EventId> for Trace {
    fn from_iter<I: IntoIterator<Item = EventId>>(iter: I) -> Self {
        Trace(iter.into_iter().collect())
    }
}

/// Per-failure-type degrees accumulated (by max) along a trace segment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeProfile(Vec<PossDegree>);

impl DegreeProfile {
    pub fn zero(types: usize) -> Self {
        DegreeProfile(vec![PossDegree::ZERO; types])
    }

    pub fn new(values: Vec<PossDegree>) -> Self {
        DegreeProfile(values)
    }

    pub fn get(&self, i: FailureTypeId) -> PossDegree {
        self.0[i.index()]
    }

    pub fn values(&self) -> &[PossDegree] {
        &self.0
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &DegreeProfile) -> DegreeProfile {
        DegreeProfile(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (*a).max(*b))
                .collect(),
        )
    }
}

#[derive(Clone, Debug)]
struct StateData {
    name: String,
    vector: FuzzyStateVec,
}

#[derive(Clone, Debug)]
struct EventData {
    name: String,
    matrix: EventMatrix,
    observability: PossDegree,
    failures: DegreeProfile,
}

/// A structurally well-formed FDES. Semantic rules (vector consistency, the
/// failure bound) are checked by [`FdesModel::validate`].
#[derive(Clone, Debug)]
pub struct FdesModel {
    dimension: usize,
    states: Vec<StateData>,
    initial: StateId,
    events: Vec<EventData>,
    failure_types: Vec<String>,
    /// `delta[state][event]`
    delta: Vec<Vec<Option<StateId>>>,
    transition_order: Vec<(StateId, EventId, StateId)>,
    state_index: HashMap<String, StateId>,
    event_index: HashMap<String, EventId>,
    type_index: HashMap<String, FailureTypeId>,
    /// Σ_mo
    maximal_observable: Vec<bool>,
}

impl FdesModel {
    /// Parses a JSON model and checks both structural and semantic rules.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc = ModelDocument::from_json(text)?;
        let model = FdesModel::from_document(&doc).map_err(Error::InvalidModel)?;
        let report = model.validate();
        if report.is_valid() {
            Ok(model)
        } else {
            Err(Error::InvalidModel(report))
        }
    }

    /// Resolves names and builds the skeleton. Fails with every structural
    /// problem found (dangling names, bad shapes, nondeterminism).
    pub fn from_document(doc: &ModelDocument) -> Result<Self, ValidationReport> {
        let mut report = ValidationReport::default();
        let n = doc.dimension;
        if n == 0 {
            report.push(ValidationIssue::ZeroDimension);
        }
        if doc.events.is_empty() {
            report.push(ValidationIssue::NoEvents);
        }

        let mut type_index = HashMap::new();
        for (i, name) in doc.failure_types.iter().enumerate() {
            if type_index
                .insert(name.clone(), FailureTypeId::from_index(i))
                .is_some()
            {
                report.push(ValidationIssue::DuplicateFailureType { name: name.clone() });
            }
        }

        let mut states = Vec::with_capacity(doc.states.len());
        let mut state_index = HashMap::new();
        for (i, (name, vector)) in doc.states.iter().enumerate() {
            if vector.len() != n {
                report.push(ValidationIssue::VectorLength {
                    state: name.clone(),
                    expected: n,
                    found: vector.len(),
                });
            }
            state_index.insert(name.clone(), StateId::from_index(i));
            states.push(StateData {
                name: name.clone(),
                vector: FuzzyStateVec::new(vector.clone()),
            });
        }

        let mut events = Vec::with_capacity(doc.events.len());
        let mut event_index = HashMap::new();
        for (i, (name, ev)) in doc.events.iter().enumerate() {
            let matrix = match EventMatrix::from_rows(ev.matrix.clone()) {
                Ok(m) if m.dimension() == n => m,
                _ => {
                    report.push(ValidationIssue::MatrixShape {
                        event: name.clone(),
                        expected: n,
                    });
                    EventMatrix::identity(n)
                }
            };
            for ty in ev.failures.keys() {
                if !type_index.contains_key(ty) {
                    report.push(ValidationIssue::UnknownFailureDegree {
                        event: name.clone(),
                        failure_type: ty.clone(),
                    });
                }
            }
            let mut failures = Vec::with_capacity(doc.failure_types.len());
            for ty in &doc.failure_types {
                match ev.failures.get(ty) {
                    Some(d) => failures.push(*d),
                    None => {
                        report.push(ValidationIssue::MissingFailureDegree {
                            event: name.clone(),
                            failure_type: ty.clone(),
                        });
                        failures.push(PossDegree::ZERO);
                    }
                }
            }
            event_index.insert(name.clone(), EventId::from_index(i));
            events.push(EventData {
                name: name.clone(),
                matrix,
                observability: ev.observability,
                failures: DegreeProfile(failures),
            });
        }

        let initial = match state_index.get(&doc.initial) {
            Some(&s) => s,
            None => {
                report.push(ValidationIssue::UnknownInitial {
                    initial: doc.initial.clone(),
                });
                StateId(0)
            }
        };

        let mut delta = vec![vec![None; events.len()]; states.len()];
        let mut transition_order = Vec::with_capacity(doc.transitions.len());
        for (src, ev, dst) in &doc.transitions {
            let lookup = (
                state_index.get(src),
                event_index.get(ev),
                state_index.get(dst),
            );
            let (s, e, t) = match lookup {
                (Some(&s), Some(&e), Some(&t)) => (s, e, t),
                _ => {
                    let missing = if lookup.0.is_none() {
                        src
                    } else if lookup.1.is_none() {
                        ev
                    } else {
                        dst
                    };
                    report.push(ValidationIssue::DanglingTransition {
                        source: src.clone(),
                        event: ev.clone(),
                        target: dst.clone(),
                        missing: missing.clone(),
                    });
                    continue;
                }
            };
            match delta[s.index()][e.index()] {
                None => {
                    delta[s.index()][e.index()] = Some(t);
                    transition_order.push((s, e, t));
                }
                Some(prev) if prev == t => report.push(ValidationIssue::DuplicateTransition {
                    source: src.clone(),
                    event: ev.clone(),
                    target: dst.clone(),
                }),
                Some(prev) => report.push(ValidationIssue::Nondeterministic {
                    source: src.clone(),
                    event: ev.clone(),
                    targets: vec![states[prev.index()].name.clone(), dst.clone()],
                }),
            }
        }

        if !report.is_valid() {
            return Err(report);
        }

        let top = events
            .iter()
            .map(|e| e.observability)
            .max()
            .unwrap_or(PossDegree::ZERO);
        let maximal_observable = events.iter().map(|e| e.observability == top).collect();

        Ok(FdesModel {
            dimension: n,
            states,
            initial,
            events,
            failure_types: doc.failure_types.clone(),
            delta,
            transition_order,
            state_index,
            event_index,
            type_index,
            maximal_observable,
        })
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            dimension: self.dimension,
            states: self
                .states
                .iter()
                .map(|s| (s.name.clone(), s.vector.entries().to_vec()))
                .collect(),
            initial: self.state_name(self.initial).to_string(),
            events: self
                .events
                .iter()
                .map(|e| {
                    let doc = EventDocument {
                        matrix: e.matrix.rows().map(|r| r.to_vec()).collect(),
                        observability: e.observability,
                        failures: self
                            .failure_types
                            .iter()
                            .cloned()
                            .zip(e.failures.0.iter().copied())
                            .collect(),
                    };
                    (e.name.clone(), doc)
                })
                .collect(),
            failure_types: self.failure_types.clone(),
            transitions: self
                .transition_order
                .iter()
                .map(|&(s, e, t)| {
                    (
                        self.state_name(s).to_string(),
                        self.event_name(e).to_string(),
                        self.state_name(t).to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        self.to_document().to_json_pretty()
    }

    /// Semantic checks: every edge's target vector is the max-min image of
    /// its source, and no failure degree exceeds the unobservability degree.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for &(s, e, t) in &self.transition_order {
            let expected = max_min_compose(self.vector(s), &self.events[e.index()].matrix)
                .expect("dimensions checked at construction");
            if &expected != self.vector(t) {
                report.push(ValidationIssue::VectorInconsistent {
                    source: self.state_name(s).to_string(),
                    event: self.event_name(e).to_string(),
                    target: self.state_name(t).to_string(),
                    expected: expected.to_string(),
                    found: self.vector(t).to_string(),
                });
            }
        }
        for ev in &self.events {
            let bound = ev.observability.complement();
            for (ty, &f) in self.failure_types.iter().zip(&ev.failures.0) {
                if f > bound {
                    report.push(ValidationIssue::FailureBound {
                        event: ev.name.clone(),
                        failure_type: ty.clone(),
                        failure: f.to_string(),
                        bound: bound.to_string(),
                    });
                }
            }
        }
        report
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn failure_type_count(&self) -> usize {
        self.failure_types.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId::from_index)
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len()).map(EventId::from_index)
    }

    pub fn failure_types(&self) -> impl Iterator<Item = FailureTypeId> + '_ {
        (0..self.failure_types.len()).map(FailureTypeId::from_index)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.index()].name
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.events[e.index()].name
    }

    pub fn failure_type_name(&self, i: FailureTypeId) -> &str {
        &self.failure_types[i.index()]
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn event_id(&self, name: &str) -> Result<EventId> {
        self.event_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEvent(name.to_string()))
    }

    pub fn failure_type_id(&self, name: &str) -> Result<FailureTypeId> {
        self.type_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownFailureType(name.to_string()))
    }

    /// Parses a comma-separated list of event names; blank input is ε.
    pub fn parse_trace(&self, text: &str) -> Result<Trace> {
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|name| self.event_id(name))
            .collect()
    }

    pub fn trace_names(&self, t: &Trace) -> Vec<String> {
        t.events()
            .iter()
            .map(|&e| self.event_name(e).to_string())
            .collect()
    }

    pub fn format_trace(&self, t: &Trace) -> String {
        if t.is_empty() {
            "ε".to_string()
        } else {
            self.trace_names(t).join(" ")
        }
    }

    pub fn vector(&self, s: StateId) -> &FuzzyStateVec {
        &self.states[s.index()].vector
    }

    pub fn matrix(&self, e: EventId) -> &EventMatrix {
        &self.events[e.index()].matrix
    }

    /// Σ̃_o(e)
    pub fn observability(&self, e: EventId) -> PossDegree {
        self.events[e.index()].observability
    }

    /// Σ̃_uo(e) = 1 − Σ̃_o(e)
    pub fn unobservability(&self, e: EventId) -> PossDegree {
        self.observability(e).complement()
    }

    /// Σ̃_f_i(e)
    pub fn failure_degree(&self, e: EventId, i: FailureTypeId) -> PossDegree {
        self.events[e.index()].failures.get(i)
    }

    /// Failure degrees of a single event, one per type.
    pub fn event_profile(&self, e: EventId) -> &DegreeProfile {
        &self.events[e.index()].failures
    }

    pub fn transitions(&self) -> &[(StateId, EventId, StateId)] {
        &self.transition_order
    }

    /// Raw skeleton edge.
    pub fn edge(&self, s: StateId, e: EventId) -> Option<StateId> {
        self.delta[s.index()][e.index()]
    }

    /// Skeleton edge into a state with a positive vector. Edges into the
    /// zero vector are not physically possible and never enter a language.
    pub fn step(&self, s: StateId, e: EventId) -> Option<StateId> {
        self.edge(s, e).filter(|t| self.vector(*t).is_positive())
    }

    pub fn is_maximal_observable(&self, e: EventId) -> bool {
        self.maximal_observable[e.index()]
    }
}

impl fmt::Display for FdesModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FDES: {} states, {} events, {} failure types, {} transitions",
            self.states.len(),
            self.events.len(),
            self.failure_types.len(),
            self.transition_order.len()
        )
    }
}
