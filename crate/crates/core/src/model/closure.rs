//! Finite summaries of the unobserved stretches between two observations.
//!
//! For a reference event σ, every string of `L(q, σ)` is a run `u` of
//! non-qualifying events followed by one qualifying event `a`. The set of
//! such `u` may be infinite when non-qualifying cycles exist, but the pairs
//! (end state, failure profile of `u`) form a finite set, which is all the
//! diagnoser needs.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{DegreeProfile, EventId, FdesModel, StateId, Trace};
use crate::error::{Error, Result};

/// A state reached from the closure origin by unobserved events, with the
/// failure profile of the connecting string and one shortest such string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SilentStep {
    pub state: StateId,
    pub profile: DegreeProfile,
    pub path: Trace,
}

impl FdesModel {
    /// Breadth-first fixpoint over non-qualifying edges from `q`, starting
    /// with `(q, 0)` for the empty run. Each (state, profile) node appears
    /// once, witnessed by a shortest string.
    pub fn silent_paths(&self, q: StateId, sigma: EventId) -> Vec<SilentStep> {
        let zero = DegreeProfile::zero(self.failure_type_count());
        let mut seen: HashSet<(StateId, DegreeProfile)> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert((q, zero.clone()));
        queue.push_back(SilentStep {
            state: q,
            profile: zero,
            path: Trace::empty(),
        });
        while let Some(node) = queue.pop_front() {
            for e in self.events() {
                if self.qualifies(e, sigma) {
                    continue;
                }
                let Some(t) = self.step(node.state, e) else {
                    continue;
                };
                let profile = node.profile.join(self.event_profile(e));
                if seen.insert((t, profile.clone())) {
                    let mut path = node.path.clone();
                    path.push(e);
                    queue.push_back(SilentStep {
                        state: t,
                        profile,
                        path,
                    });
                }
            }
            out.push(node);
        }
        out
    }

    /// The (state, profile) pairs reachable from `q` by non-qualifying runs.
    pub fn silent_closure(&self, q: StateId, sigma: EventId) -> BTreeSet<(StateId, DegreeProfile)> {
        self.silent_paths(q, sigma)
            .into_iter()
            .map(|s| (s.state, s.profile))
            .collect()
    }

    /// Every way to complete a string of `L_a(q, σ)`: the target of the
    /// final `a` together with the profile of the whole string and a witness.
    pub fn reach_via_l_a_paths(
        &self,
        q: StateId,
        sigma: EventId,
        a: EventId,
    ) -> Result<Vec<SilentStep>> {
        if !self.qualifies(a, sigma) {
            return Err(Error::NotQualifying {
                event: self.event_name(a).to_string(),
                sigma: self.event_name(sigma).to_string(),
            });
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for step in self.silent_paths(q, sigma) {
            let Some(t) = self.step(step.state, a) else {
                continue;
            };
            let profile = step.profile.join(self.event_profile(a));
            if seen.insert((t, profile.clone())) {
                let mut path = step.path;
                path.push(a);
                out.push(SilentStep {
                    state: t,
                    profile,
                    path,
                });
            }
        }
        Ok(out)
    }

    /// `{(δ(q', a), max(p, Σ̃_f(a))) : (q', p) ∈ silent_closure(q, σ)}`.
    pub fn reach_via_l_a(
        &self,
        q: StateId,
        sigma: EventId,
        a: EventId,
    ) -> Result<BTreeSet<(StateId, DegreeProfile)>> {
        Ok(self
            .reach_via_l_a_paths(q, sigma, a)?
            .into_iter()
            .map(|s| (s.state, s.profile))
            .collect())
    }
}
