//! Observability-based diagnosers with respect to a reference event.

mod cycle;
mod dot;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

pub use cycle::{CycleStep, IndeterminateCycle};

use crate::error::{Error, Result};
use crate::model::{A2Status, DegreeProfile, EventId, FailureTypeId, FdesModel, StateId, Trace};

/// Failure label of a diagnoser pair: the normal marker or a non-empty set
/// of failure tags.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelSet {
    Normal,
    Faults(BTreeSet<FailureTypeId>),
}

impl LabelSet {
    pub fn contains(&self, i: FailureTypeId) -> bool {
        match self {
            LabelSet::Normal => false,
            LabelSet::Faults(tags) => tags.contains(&i),
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, LabelSet::Normal)
    }

    /// `N` or `{F1,F2}`.
    pub fn display(&self, model: &FdesModel) -> String {
        match self {
            LabelSet::Normal => "N".to_string(),
            LabelSet::Faults(tags) => {
                let names: Vec<String> = tags
                    .iter()
                    .map(|&i| fault_tag(model.failure_type_name(i)))
                    .collect();
                format!("{{{}}}", names.join(","))
            }
        }
    }
}

/// `f1` becomes `F1`.
pub fn fault_tag(type_name: &str) -> String {
    let mut chars = type_name.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certainty {
    CertainWithFault,
    CertainWithoutFault,
    Uncertain,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::CertainWithFault => "certain (faulty)",
            Certainty::CertainWithoutFault => "certain (normal)",
            Certainty::Uncertain => "uncertain",
        })
    }
}

/// A canonical, duplicate-free set of (state, label) pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagnoserState(Vec<(StateId, LabelSet)>);

impl DiagnoserState {
    /// Sorts by state name, then label, and removes duplicates.
    pub fn canonical(model: &FdesModel, mut pairs: Vec<(StateId, LabelSet)>) -> Self {
        pairs.sort_by(|a, b| {
            model
                .state_name(a.0)
                .cmp(model.state_name(b.0))
                .then_with(|| a.1.cmp(&b.1))
        });
        pairs.dedup();
        DiagnoserState(pairs)
    }

    pub fn pairs(&self) -> &[(StateId, LabelSet)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn classify(&self, i: FailureTypeId) -> Certainty {
        let with = self.0.iter().filter(|(_, l)| l.contains(i)).count();
        if with == self.0.len() {
            Certainty::CertainWithFault
        } else if with == 0 {
            Certainty::CertainWithoutFault
        } else {
            Certainty::Uncertain
        }
    }

    /// `q1 N | q5 {F1}`
    pub fn display(&self, model: &FdesModel) -> String {
        self.0
            .iter()
            .map(|(q, l)| pair_display(model, *q, l))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

pub fn pair_display(model: &FdesModel, q: StateId, l: &LabelSet) -> String {
    format!("{} {}", model.state_name(q), l.display(model))
}

/// Σ_d: the events kept by the σ-projection, in declaration order.
pub fn sigma_event_set(model: &FdesModel, sigma: EventId) -> Vec<EventId> {
    model
        .events()
        .filter(|&a| model.qualifies(a, sigma))
        .collect()
}

/// Appends `F_i` when the connecting string reaches the type-i threshold
/// `Σ̃_f_i(σ)`; tags already present are kept.
pub fn label_propagate(
    model: &FdesModel,
    sigma: EventId,
    label: &LabelSet,
    profile: &DegreeProfile,
) -> LabelSet {
    let mut tags: BTreeSet<FailureTypeId> = match label {
        LabelSet::Normal => BTreeSet::new(),
        LabelSet::Faults(t) => t.clone(),
    };
    for i in model.failure_types() {
        if profile.get(i) >= model.failure_degree(sigma, i) {
            tags.insert(i);
        }
    }
    if tags.is_empty() {
        LabelSet::Normal
    } else {
        LabelSet::Faults(tags)
    }
}

/// δ_d(χ, a); `Ok(None)` when no pair of `χ` can complete a string ending in `a`.
pub fn delta_d(
    model: &FdesModel,
    sigma: EventId,
    chi: &DiagnoserState,
    a: EventId,
) -> Result<Option<DiagnoserState>> {
    if !model.qualifies(a, sigma) {
        return Err(Error::NotObservable {
            event: model.event_name(a).to_string(),
            sigma: model.event_name(sigma).to_string(),
        });
    }
    let mut pairs = Vec::new();
    for (q, label) in chi.pairs() {
        for (target, profile) in model.reach_via_l_a(*q, sigma, a)? {
            pairs.push((target, label_propagate(model, sigma, label, &profile)));
        }
    }
    if pairs.is_empty() {
        Ok(None)
    } else {
        Ok(Some(DiagnoserState::canonical(model, pairs)))
    }
}

/// The diagnoser G_d with respect to σ. States are numbered in
/// breadth-first discovery order; state 0 is χ0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnoser {
    sigma: EventId,
    events: Vec<EventId>,
    a2: A2Status,
    states: Vec<DiagnoserState>,
    index: HashMap<DiagnoserState, usize>,
    /// Transitions in discovery order.
    edges: Vec<(usize, EventId, usize)>,
    delta: HashMap<(usize, EventId), usize>,
}

impl Diagnoser {
    /// Breadth-first closure of χ0 = {(q0, N)} under δ_d. Refuses when A2
    /// is violated for σ.
    pub fn build(model: &FdesModel, sigma: EventId) -> Result<Self> {
        let a2 = model.check_a2_detailed(sigma);
        if a2.status == A2Status::Violated {
            let cycle = a2
                .cycle
                .as_deref()
                .map(|c| model.format_cycle(c))
                .unwrap_or_default();
            return Err(Error::A2Violated {
                sigma: model.event_name(sigma).to_string(),
                cycle,
            });
        }
        let events = sigma_event_set(model, sigma);
        let chi0 = DiagnoserState::canonical(model, vec![(model.initial(), LabelSet::Normal)]);
        let mut d = Diagnoser {
            sigma,
            events,
            a2: a2.status,
            states: vec![chi0.clone()],
            index: HashMap::from([(chi0, 0)]),
            edges: Vec::new(),
            delta: HashMap::new(),
        };
        let mut queue = VecDeque::from([0usize]);
        while let Some(from) = queue.pop_front() {
            for k in 0..d.events.len() {
                let a = d.events[k];
                let Some(next) = delta_d(model, sigma, &d.states[from], a)? else {
                    continue;
                };
                let to = match d.index.get(&next) {
                    Some(&to) => to,
                    None => {
                        let to = d.states.len();
                        d.index.insert(next.clone(), to);
                        d.states.push(next);
                        queue.push_back(to);
                        to
                    }
                };
                d.edges.push((from, a, to));
                d.delta.insert((from, a), to);
            }
        }
        Ok(d)
    }

    pub fn sigma(&self) -> EventId {
        self.sigma
    }

    /// Σ_d in declaration order.
    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn a2_status(&self) -> A2Status {
        self.a2
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn states(&self) -> &[DiagnoserState] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &DiagnoserState {
        &self.states[k]
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn edges(&self) -> &[(usize, EventId, usize)] {
        &self.edges
    }

    pub fn find(&self, chi: &DiagnoserState) -> Option<usize> {
        self.index.get(chi).copied()
    }

    pub fn next(&self, from: usize, a: EventId) -> Option<usize> {
        self.delta.get(&(from, a)).copied()
    }

    pub fn classify(&self, k: usize, i: FailureTypeId) -> Certainty {
        self.states[k].classify(i)
    }

    /// Runs an observed string from χ0. Fails on events outside Σ_d;
    /// `Ok(None)` when the diagnoser has no matching transition.
    pub fn observe(&self, model: &FdesModel, y: &Trace) -> Result<Option<usize>> {
        let mut cur = self.initial();
        for &a in y.events() {
            if !self.events.contains(&a) {
                return Err(Error::NotObservable {
                    event: model.event_name(a).to_string(),
                    sigma: model.event_name(self.sigma).to_string(),
                });
            }
            match self.next(cur, a) {
                Some(n) => cur = n,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// Whether the F_i-uncertain states, with the transitions among them,
    /// contain a cycle.
    pub fn has_uncertain_cycle(&self, i: FailureTypeId) -> bool {
        let mut g = crate::graph::Digraph::with_nodes(self.states.len());
        for &(from, a, to) in &self.edges {
            if self.classify(from, i) == Certainty::Uncertain
                && self.classify(to, i) == Certainty::Uncertain
            {
                g.add_edge(from, to, a);
            }
        }
        let (comp, cyclic) = g.cyclic_components();
        comp.iter().any(|&c| cyclic[c])
    }
}
