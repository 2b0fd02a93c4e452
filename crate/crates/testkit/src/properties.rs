//! Diagnoser property checks, each returning the first violation found.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fdes_core::diagnoser::label_propagate;
use fdes_core::{
    Certainty, Diagnoser, EventId, FailureTypeId, FdesModel, LabelSet, StateId, Trace,
};

use crate::simple_cycles;

/// Every diagnoser that can be built, one per event.
pub fn diagnosers(m: &FdesModel) -> Vec<Diagnoser> {
    m.events()
        .filter_map(|s| Diagnoser::build(m, s).ok())
        .collect()
}

/// Label monotonicity and exactness of each edge: the successor holds
/// exactly the propagated pairs, and no tag is ever dropped.
pub fn edges_follow_propagation(m: &FdesModel, d: &Diagnoser) -> Result<(), String> {
    let sigma = d.sigma();
    for &(from, a, to) in d.edges() {
        let mut generated = BTreeSet::new();
        for (q, label) in d.state(from).pairs() {
            for (q2, p) in m.reach_via_l_a(*q, sigma, a).map_err(|e| e.to_string())? {
                let l2 = label_propagate(m, sigma, label, &p);
                if let Some(i) = m
                    .failure_types()
                    .find(|&i| label.contains(i) && !l2.contains(i))
                {
                    return Err(format!(
                        "edge {from}->{to}: tag {} dropped",
                        m.failure_type_name(i)
                    ));
                }
                generated.insert((q2, l2));
            }
        }
        let target: BTreeSet<_> = d.state(to).pairs().iter().cloned().collect();
        if generated != target {
            return Err(format!(
                "edge {from} -{}-> {to} does not match propagation",
                m.event_name(a)
            ));
        }
    }
    Ok(())
}

pub fn diagnoser_cycles(d: &Diagnoser) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); d.state_count()];
    for &(a, _, b) in d.edges() {
        if !succ[a].contains(&b) {
            succ[a].push(b);
        }
    }
    simple_cycles(&succ)
}

fn label_multiset(d: &Diagnoser, k: usize) -> Vec<LabelSet> {
    let mut labels: Vec<LabelSet> = d.state(k).pairs().iter().map(|(_, l)| l.clone()).collect();
    labels.sort();
    labels
}

/// All states on each cycle carry the same multiset of labels.
pub fn cycle_labels_agree(m: &FdesModel, d: &Diagnoser) -> Result<(), String> {
    for cycle in diagnoser_cycles(d) {
        let first = label_multiset(d, cycle[0]);
        if let Some(&k) = cycle.iter().find(|&&k| label_multiset(d, k) != first) {
            return Err(format!(
                "w.r.t. {}: [{}] and [{}] lie on one cycle",
                m.event_name(d.sigma()),
                d.state(cycle[0]).display(m),
                d.state(k).display(m)
            ));
        }
    }
    Ok(())
}

/// Along each cycle a type is certain-with-fault at every state or at none.
pub fn cycle_certainty_uniform(m: &FdesModel, d: &Diagnoser) -> Result<(), String> {
    for cycle in diagnoser_cycles(d) {
        for i in m.failure_types() {
            let faulty = cycle
                .iter()
                .filter(|&&k| d.classify(k, i) == Certainty::CertainWithFault)
                .count();
            if faulty != 0 && faulty != cycle.len() {
                return Err(format!(
                    "cycle {cycle:?} mixes certainty for {}",
                    m.failure_type_name(i)
                ));
            }
        }
    }
    Ok(())
}

/// The label a string earns: every type whose failure degree reaches the
/// threshold somewhere along it.
pub fn trace_label(m: &FdesModel, sigma: EventId, s: &[EventId]) -> LabelSet {
    let profile = m.failure_profile(&Trace::new(s.to_vec()));
    let tags: BTreeSet<FailureTypeId> = m
        .failure_types()
        .filter(|&i| profile.get(i) >= m.failure_degree(sigma, i))
        .collect();
    if tags.is_empty() {
        LabelSet::Normal
    } else {
        LabelSet::Faults(tags)
    }
}

/// Strings of length ≤ `max_len` that are empty or end in a Σ_d event,
/// grouped by observation, with (end state, earned label).
pub fn observed_runs(
    m: &FdesModel,
    sigma: EventId,
    max_len: usize,
) -> BTreeMap<Trace, BTreeSet<(StateId, LabelSet)>> {
    let mut out: BTreeMap<Trace, BTreeSet<(StateId, LabelSet)>> = BTreeMap::new();
    out.entry(Trace::empty())
        .or_default()
        .insert((m.initial(), LabelSet::Normal));
    m.for_each_positive_trace(max_len, |s, q| {
        if m.qualifies(*s.last().expect("non-empty"), sigma) {
            let u = m.sigma_project(&Trace::new(s.to_vec()), sigma);
            out.entry(u)
                .or_default()
                .insert((q, trace_label(m, sigma, s)));
        }
        true
    });
    out
}

/// Checks by enumeration up to `max_len` that each diagnoser state is
/// exactly the set of (state, label) pairs of strings with its observation
/// and that its certainty matches whether those strings agree on each type.
pub fn states_match_strings(m: &FdesModel, d: &Diagnoser, max_len: usize) -> Result<(), String> {
    let sigma = d.sigma();
    let name = m.event_name(sigma);
    let mut realized: Vec<BTreeSet<(StateId, LabelSet)>> = vec![BTreeSet::new(); d.state_count()];
    let mut seen: HashMap<(usize, FailureTypeId), (bool, bool)> = HashMap::new();
    for (u, pairs) in &observed_runs(m, sigma, max_len) {
        let k = d
            .observe(m, u)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("w.r.t. {name}: observation {} rejected", m.format_trace(u)))?;
        let chi: BTreeSet<_> = d.state(k).pairs().iter().cloned().collect();
        if !pairs.is_subset(&chi) {
            return Err(format!(
                "w.r.t. {name}: {} reaches pairs outside its state",
                m.format_trace(u)
            ));
        }
        realized[k].extend(pairs.iter().cloned());
        for i in m.failure_types() {
            let e = seen.entry((k, i)).or_default();
            for (_, l) in pairs {
                if l.contains(i) {
                    e.0 = true;
                } else {
                    e.1 = true;
                }
            }
        }
    }
    for (k, got) in realized.iter().enumerate() {
        let chi: BTreeSet<_> = d.state(k).pairs().iter().cloned().collect();
        if *got != chi {
            return Err(format!(
                "w.r.t. {name}: state [{}] not fully realized",
                d.state(k).display(m)
            ));
        }
        for i in m.failure_types() {
            let expected = match seen[&(k, i)] {
                (true, false) => Certainty::CertainWithFault,
                (false, true) => Certainty::CertainWithoutFault,
                _ => Certainty::Uncertain,
            };
            if d.classify(k, i) != expected {
                return Err(format!(
                    "w.r.t. {name}: [{}] is {} for {} but strings say {expected}",
                    d.state(k).display(m),
                    d.classify(k, i),
                    m.failure_type_name(i)
                ));
            }
        }
    }
    Ok(())
}
