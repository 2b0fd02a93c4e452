//! Trace-level operations: runs, degrees of strings, σ-projection and the
//! bounded language enumerations.

use super::{DegreeProfile, EventId, FailureTypeId, FdesModel, StateId, Trace};
use crate::possibility::{degree_min, FuzzyStateVec, PossDegree};

impl FdesModel {
    /// Follows the skeleton from `from`; `None` once a step is undefined.
    pub fn run_from(&self, from: StateId, s: &Trace) -> Option<StateId> {
        s.events().iter().try_fold(from, |q, &e| self.edge(q, e))
    }

    /// Vector reached by `s` from q0, or `None` if the skeleton leaves the
    /// partial transition map.
    pub fn run(&self, s: &Trace) -> Option<&FuzzyStateVec> {
        self.run_from(self.initial, s).map(|q| self.vector(q))
    }

    /// Physically possible: the path exists and ends on a positive vector.
    pub fn language_positive(&self, s: &Trace) -> bool {
        self.run(s).is_some_and(FuzzyStateVec::is_positive)
    }

    /// Informational language degree: the peak entry of the reached vector.
    pub fn language_degree(&self, s: &Trace) -> PossDegree {
        self.run(s)
            .map(FuzzyStateVec::peak)
            .unwrap_or(PossDegree::ZERO)
    }

    /// Σ̃_o(s): the minimum over the events of `s`, with Σ̃_o(ε) = 0.
    pub fn obs_degree_of_trace(&self, s: &Trace) -> PossDegree {
        degree_min(s.events().iter().map(|&e| self.observability(e))).unwrap_or(PossDegree::ZERO)
    }

    /// Σ̃_f_i(s) for every type: the maximum over the events of `s`.
    pub fn failure_profile(&self, s: &Trace) -> DegreeProfile {
        s.events()
            .iter()
            .fold(DegreeProfile::zero(self.failure_type_count()), |acc, &e| {
                acc.join(self.event_profile(e))
            })
    }

    /// Σ_mo, in declaration order.
    pub fn maximal_observable_set(&self) -> Vec<EventId> {
        self.events()
            .filter(|&e| self.is_maximal_observable(e))
            .collect()
    }

    /// Whether `a` survives the σ-projection.
    pub fn qualifies(&self, a: EventId, sigma: EventId) -> bool {
        self.is_maximal_observable(a) || self.observability(a) > self.observability(sigma)
    }

    /// P_σ(s)
    pub fn sigma_project(&self, s: &Trace, sigma: EventId) -> Trace {
        s.events()
            .iter()
            .copied()
            .filter(|&a| self.qualifies(a, sigma))
            .collect()
    }

    /// Visits every physically possible trace of length `1..=max_len` from
    /// q0 in depth-first, declaration order. The visitor sees the trace and
    /// its end state and returns whether to descend further.
    pub fn for_each_positive_trace<F>(&self, max_len: usize, mut visit: F)
    where
        F: FnMut(&[EventId], StateId) -> bool,
    {
        if !self.vector(self.initial).is_positive() {
            return;
        }
        let mut path = Vec::with_capacity(max_len);
        self.walk(self.initial, max_len, &mut path, &mut visit);
    }

    fn walk<F>(&self, q: StateId, max_len: usize, path: &mut Vec<EventId>, visit: &mut F)
    where
        F: FnMut(&[EventId], StateId) -> bool,
    {
        if path.len() == max_len {
            return;
        }
        for e in self.events() {
            if let Some(t) = self.step(q, e) {
                path.push(e);
                if visit(path, t) {
                    self.walk(t, max_len, path, visit);
                }
                path.pop();
            }
        }
    }

    /// P_σ⁻¹(y) restricted to traces of length at most `max_len`, sorted.
    pub fn inverse_project_bounded(&self, y: &Trace, sigma: EventId, max_len: usize) -> Vec<Trace> {
        let mut out = Vec::new();
        if y.is_empty() && self.language_positive(&Trace::empty()) {
            out.push(Trace::empty());
        }
        let target = y.events();
        // Observed-prefix length is tracked alongside the path so pruning is O(1).
        let mut observed: Vec<usize> = vec![0];
        self.for_each_positive_trace(max_len, |path, _| {
            observed.truncate(path.len());
            let prev = observed[path.len() - 1];
            let e = *path.last().expect("non-empty path");
            let next = if self.qualifies(e, sigma) {
                if prev < target.len() && target[prev] == e {
                    prev + 1
                } else {
                    return false;
                }
            } else {
                prev
            };
            observed.push(next);
            if next == target.len() {
                out.push(Trace::new(path.to_vec()));
            }
            true
        });
        out.sort();
        out
    }

    /// Ψ_σ(Σ̃_f_i) restricted to traces of length at most `max_len`: the
    /// possible traces whose final event has Σ̃_f_i at least Σ̃_f_i(σ).
    pub fn psi_bounded(&self, sigma: EventId, i: FailureTypeId, max_len: usize) -> Vec<Trace> {
        let threshold = self.failure_degree(sigma, i);
        let mut out = Vec::new();
        self.for_each_positive_trace(max_len, |path, _| {
            let last = *path.last().expect("non-empty path");
            if self.failure_degree(last, i) >= threshold {
                out.push(Trace::new(path.to_vec()));
            }
            true
        });
        out.sort();
        out
    }

    /// Postlanguage L/s restricted to continuations of length at most `max_len`.
    pub fn postlanguage_bounded(&self, s: &Trace, max_len: usize) -> Vec<Trace> {
        let Some(start) = self.run_from(self.initial, s) else {
            return Vec::new();
        };
        if !self.vector(start).is_positive() || !self.language_positive(s) {
            return Vec::new();
        }
        let mut out = vec![Trace::empty()];
        let mut path = Vec::new();
        let mut collect = |p: &[EventId], _: StateId| {
            out.push(Trace::new(p.to_vec()));
            true
        };
        self.walk(start, max_len, &mut path, &mut collect);
        out.sort();
        out
    }
}
