//! Liveness (A1) and bounded unobserved runs (A2).

use std::fmt;

use serde::Serialize;

use super::{EventId, FdesModel, StateId};
use crate::graph::Digraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum A2Status {
    /// No reachable cycle of non-qualifying events.
    Strict,
    /// Non-qualifying cycles exist but none can lead to a qualifying event.
    Vacuous,
    /// A non-qualifying cycle can precede a qualifying event, so some
    /// `L(q, σ)` has unboundedly long members.
    Violated,
}

impl fmt::Display for A2Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            A2Status::Strict => "strict",
            A2Status::Vacuous => "vacuous",
            A2Status::Violated => "violated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A2Check {
    pub status: A2Status,
    /// For `Violated`, a non-qualifying cycle that reaches a qualifying edge.
    pub cycle: Option<Vec<(StateId, EventId, StateId)>>,
}

impl FdesModel {
    /// States reachable from q0 along physically possible edges.
    pub fn reachable_states(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        if !self.vector(self.initial).is_positive() {
            return seen;
        }
        let mut stack = vec![self.initial];
        seen[self.initial.index()] = true;
        while let Some(q) = stack.pop() {
            for e in self.events() {
                if let Some(t) = self.step(q, e) {
                    if !seen[t.index()] {
                        seen[t.index()] = true;
                        stack.push(t);
                    }
                }
            }
        }
        seen
    }

    /// A1: every reachable state has an outgoing possible transition.
    pub fn check_a1(&self) -> bool {
        let reachable = self.reachable_states();
        self.states()
            .filter(|q| reachable[q.index()])
            .all(|q| self.events().any(|e| self.step(q, e).is_some()))
    }

    pub fn check_a2(&self, sigma: EventId) -> A2Status {
        self.check_a2_detailed(sigma).status
    }

    pub fn check_a2_detailed(&self, sigma: EventId) -> A2Check {
        let reachable = self.reachable_states();
        let mut graph: Digraph<EventId> = Digraph::with_nodes(self.state_count());
        let mut exits = vec![false; self.state_count()];
        for q in self.states().filter(|q| reachable[q.index()]) {
            for e in self.events() {
                let Some(t) = self.step(q, e) else { continue };
                if self.qualifies(e, sigma) {
                    exits[q.index()] = true;
                } else {
                    graph.add_edge(q.index(), t.index(), e);
                }
            }
        }
        let (comp, cyclic) = graph.cyclic_components();

        // States that can reach a qualifying edge through non-qualifying ones.
        let mut leads_out = exits.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for q in 0..self.state_count() {
                if !leads_out[q] && graph.successors(q).iter().any(|(t, _)| leads_out[*t]) {
                    leads_out[q] = true;
                    changed = true;
                }
            }
        }

        let mut any_cycle = false;
        for q in 0..self.state_count() {
            if !reachable[q] || !cyclic[comp[q]] {
                continue;
            }
            any_cycle = true;
            if leads_out[q] {
                let cycle = graph
                    .shortest_cycle_through(q, &comp)
                    .expect("cyclic component");
                let cycle = cycle
                    .into_iter()
                    .map(|(a, e, b)| (StateId::from_index(a), e, StateId::from_index(b)))
                    .collect();
                return A2Check {
                    status: A2Status::Violated,
                    cycle: Some(cycle),
                };
            }
        }
        let status = if any_cycle {
            A2Status::Vacuous
        } else {
            A2Status::Strict
        };
        A2Check {
            status,
            cycle: None,
        }
    }

    pub fn format_cycle(&self, cycle: &[(StateId, EventId, StateId)]) -> String {
        let mut out = String::new();
        for (i, &(a, e, b)) in cycle.iter().enumerate() {
            if i == 0 {
                out.push_str(self.state_name(a));
            }
            out.push_str(&format!(
                " -{}-> {}",
                self.event_name(e),
                self.state_name(b)
            ));
        }
        out
    }
}
