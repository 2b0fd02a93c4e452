//! Bounded brute-force check of the delay definition.
//!
//! For a string `x = s t` whose first event at or above the threshold
//! `Σ̃_f_i(σ)` ends `s`, the delay condition is broken at every `n ≤ |t|`
//! exactly when some non-empty possible `ω` with `P_σ(ω) = P_σ(x)` uses only
//! events below the threshold. The least passing delay within the bound is
//! therefore one more than the longest such `t`.
//!
//! Bounded data alone cannot prove a delay, so a delay is only reported when
//! the bound covers it and the diagnoser shows that uncertainty cannot
//! persist. A refutation is only reported when the counterexample can be
//! pumped to make `t` arbitrarily long.

use std::collections::HashMap;

use serde::Serialize;

use crate::diagnoser::Diagnoser;
use crate::error::{Error, Result};
use crate::model::{EventId, FailureTypeId, FdesModel, StateId, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_delay: usize,
    pub max_len: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds {
            max_delay: 6,
            max_len: 12,
        }
    }
}

/// A triple `(s, t, ω)` breaking the delay condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub s: Trace,
    pub t: Trace,
    pub omega: Trace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    /// The least delay that passes every bounded check.
    HoldsWithDelay(usize),
    /// A pumpable counterexample with `|t| ≥ max_delay`.
    FailsWithWitness(Counterexample),
    Inconclusive(String),
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum OutcomeJson {
    HoldsWithDelay {
        delay: usize,
    },
    FailsWithWitness {
        s: Vec<String>,
        t: Vec<String>,
        omega: Vec<String>,
    },
    Inconclusive {
        reason: String,
    },
}

impl OracleOutcome {
    pub fn to_json_pretty(&self, model: &FdesModel) -> String {
        let json = match self {
            OracleOutcome::HoldsWithDelay(n) => OutcomeJson::HoldsWithDelay { delay: *n },
            OracleOutcome::FailsWithWitness(cx) => OutcomeJson::FailsWithWitness {
                s: model.trace_names(&cx.s),
                t: model.trace_names(&cx.t),
                omega: model.trace_names(&cx.omega),
            },
            OracleOutcome::Inconclusive(reason) => OutcomeJson::Inconclusive {
                reason: reason.clone(),
            },
        };
        serde_json::to_string_pretty(&json).expect("outcome serializes")
    }
}

/// States visited by `x` from q0, `x.len() + 1` entries.
fn state_path(model: &FdesModel, x: &[EventId]) -> Vec<StateId> {
    let mut out = vec![model.initial()];
    for &e in x {
        out.push(
            model
                .edge(*out.last().unwrap(), e)
                .expect("enumerated traces follow the skeleton"),
        );
    }
    out
}

/// Positions just after each qualifying event, paired with the state there.
fn boundaries(
    model: &FdesModel,
    sigma: EventId,
    x: &[EventId],
    states: &[StateId],
) -> Vec<(usize, StateId)> {
    x.iter()
        .enumerate()
        .filter(|(_, &e)| model.qualifies(e, sigma))
        .map(|(p, _)| (p + 1, states[p + 1]))
        .collect()
}

/// Whether `t` (everything after position `cut`) can be lengthened without
/// changing the projection of `x` or the witness `ω`.
fn pumpable(
    model: &FdesModel,
    sigma: EventId,
    x: &[EventId],
    cut: usize,
    omega: &[EventId],
) -> bool {
    let xs = state_path(model, x);
    // A repeated state joined by unobserved events only.
    for j1 in cut..xs.len() {
        for j2 in (j1 + 1)..xs.len() {
            if !model.qualifies(x[j2 - 1], sigma) && xs[j1] == xs[j2] {
                return true;
            }
            if model.qualifies(x[j2 - 1], sigma) {
                break;
            }
        }
    }
    // Two observation boundaries after `cut` where both runs repeat a state.
    let ws = state_path(model, omega);
    let bx = boundaries(model, sigma, x, &xs);
    let bw = boundaries(model, sigma, omega, &ws);
    for k1 in 0..bx.len() {
        if bx[k1].0 < cut {
            continue;
        }
        for k2 in (k1 + 1)..bx.len() {
            if bx[k1].1 == bx[k2].1 && bw[k1].1 == bw[k2].1 {
                return true;
            }
        }
    }
    false
}

fn by_length_then_lex(a: &[EventId], b: &[EventId]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn oracle_check(
    model: &FdesModel,
    sigma: EventId,
    i: FailureTypeId,
    bounds: OracleBounds,
) -> Result<OracleOutcome> {
    if bounds.max_len == 0 {
        return Err(Error::InvalidBound(
            "max_len must be at least 1".to_string(),
        ));
    }
    let threshold = model.failure_degree(sigma, i);
    let high = |e: EventId| model.failure_degree(e, i) >= threshold;
    let project = |x: &[EventId]| -> Trace {
        x.iter()
            .copied()
            .filter(|&e| model.qualifies(e, sigma))
            .collect()
    };

    // Non-empty possible strings entirely below the threshold, by projection.
    let mut low: HashMap<Trace, Vec<Vec<EventId>>> = HashMap::new();
    model.for_each_positive_trace(bounds.max_len, |x, _| {
        if high(*x.last().expect("non-empty")) {
            return false;
        }
        low.entry(project(x)).or_default().push(x.to_vec());
        true
    });
    for omegas in low.values_mut() {
        omegas.sort_by(|a, b| by_length_then_lex(a, b));
    }

    let mut longest_t: Option<usize> = None;
    let mut witness: Option<(Vec<EventId>, usize, Vec<EventId>)> = None;
    model.for_each_positive_trace(bounds.max_len, |x, _| {
        let y = project(x);
        let Some(omegas) = low.get(&y) else {
            return y.is_empty();
        };
        let Some(first_high) = x.iter().position(|&e| high(e)) else {
            return true;
        };
        let cut = first_high + 1;
        let t_len = x.len() - cut;
        longest_t = longest_t.max(Some(t_len));
        if t_len >= bounds.max_delay
            && witness
                .as_ref()
                .map_or(true, |(w, _, _)| by_length_then_lex(x, w).is_lt())
        {
            if let Some(omega) = omegas.iter().find(|w| pumpable(model, sigma, x, cut, w)) {
                witness = Some((x.to_vec(), cut, omega.clone()));
            }
        }
        true
    });

    if let Some((x, cut, omega)) = witness {
        let (s, t) = x.split_at(cut);
        return Ok(OracleOutcome::FailsWithWitness(Counterexample {
            s: Trace::new(s.to_vec()),
            t: Trace::new(t.to_vec()),
            omega: Trace::new(omega),
        }));
    }

    let least = longest_t.map_or(0, |m| m + 1);
    if least > bounds.max_delay {
        return Ok(OracleOutcome::Inconclusive(format!(
            "no delay up to {} passes and no pumpable counterexample was found",
            bounds.max_delay
        )));
    }
    let reachable = model.reachable_states().iter().filter(|&&r| r).count();
    if bounds.max_len < reachable + least {
        return Ok(OracleOutcome::Inconclusive(format!(
            "max_len {} is below {} reachable states plus delay {}",
            bounds.max_len, reachable, least
        )));
    }
    let settles = match Diagnoser::build(model, sigma) {
        Ok(d) => !d.has_uncertain_cycle(i),
        Err(_) => false,
    };
    if !settles {
        return Ok(OracleOutcome::Inconclusive(format!(
            "delay {least} passes within the bound but uncertainty may persist beyond it"
        )));
    }
    Ok(OracleOutcome::HoldsWithDelay(least))
}
