//! Diagnosability decisions.
//!
//! [`check_wrt`] decides F_i-diagnosability with respect to one σ by the
//! absence of F_i-indeterminate cycles; [`check_type`] takes the conjunction
//! over every σ with a positive type-i failure degree. [`oracle_check`]
//! tests the delay definition directly on bounded trace sets and shares no
//! code with the diagnoser beyond the model's language operations.

mod oracle;

use serde::Serialize;

pub use oracle::{oracle_check, Counterexample, OracleBounds, OracleOutcome};

use crate::diagnoser::{pair_display, Diagnoser, IndeterminateCycle};
use crate::error::{Error, Result};
use crate::model::{A2Status, EventId, FailureTypeId, FdesModel, Trace};
use crate::par::Execution;

/// Σ_fail_i: events whose type-i failure degree is positive.
pub fn failure_events(model: &FdesModel, i: FailureTypeId) -> Vec<EventId> {
    model
        .events()
        .filter(|&e| !model.failure_degree(e, i).is_zero())
        .collect()
}

/// Serializable description of an indeterminate cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub diagnoser_cycle: Vec<String>,
    pub events: Vec<String>,
    pub faulty_run: Vec<String>,
    pub normal_run: Vec<String>,
    pub faulty_prefix: Vec<String>,
    pub normal_prefix: Vec<String>,
    pub faulty_loop: Vec<String>,
    pub normal_loop: Vec<String>,
}

impl WitnessReport {
    pub fn new(model: &FdesModel, d: &Diagnoser, c: &IndeterminateCycle) -> Self {
        let pairs = |ps: Vec<_>| ps.iter().map(|(q, l)| pair_display(model, *q, l)).collect();
        WitnessReport {
            diagnoser_cycle: c
                .diagnoser_states()
                .iter()
                .map(|&k| d.state(k).display(model))
                .collect(),
            events: model.trace_names(&Trace::new(c.observed())),
            faulty_run: pairs(c.faulty_pairs()),
            normal_run: pairs(c.normal_pairs()),
            faulty_prefix: model.trace_names(&c.faulty_prefix),
            normal_prefix: model.trace_names(&c.normal_prefix),
            faulty_loop: model.trace_names(&c.faulty_loop()),
            normal_loop: model.trace_names(&c.normal_loop()),
        }
    }
}

/// Result for one reference event.
#[derive(Clone, Debug, Serialize)]
pub struct SigmaVerdict {
    pub sigma: String,
    #[serde(skip)]
    pub sigma_id: EventId,
    /// `None` when A2 is violated and no verdict is given.
    pub diagnosable: Option<bool>,
    pub a2_status: A2Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delay: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unobserved_cycle: Option<String>,
    #[serde(skip)]
    pub cycle: Option<IndeterminateCycle>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    #[serde(rename = "type")]
    pub failure_type: String,
    #[serde(skip)]
    pub type_id: FailureTypeId,
    pub per_sigma: Vec<SigmaVerdict>,
    /// False if any σ is refuted, otherwise `None` if any σ is undetermined.
    pub aggregate: Option<bool>,
}

impl VerdictReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn aggregate(per_sigma: &[SigmaVerdict]) -> Option<bool> {
    if per_sigma.iter().any(|v| v.diagnosable == Some(false)) {
        Some(false)
    } else if per_sigma.iter().any(|v| v.diagnosable.is_none()) {
        None
    } else {
        Some(true)
    }
}

/// Diagnosability of type `i` with respect to `sigma`. Refuses when A2 is
/// violated for `sigma`.
pub fn check_wrt(model: &FdesModel, sigma: EventId, i: FailureTypeId) -> Result<SigmaVerdict> {
    let d = Diagnoser::build(model, sigma)?;
    let cycle = d.find_indeterminate_cycle(model, i);
    Ok(SigmaVerdict {
        sigma: model.event_name(sigma).to_string(),
        sigma_id: sigma,
        diagnosable: Some(cycle.is_none()),
        a2_status: d.a2_status(),
        witness: cycle.as_ref().map(|c| WitnessReport::new(model, &d, c)),
        delay: None,
        unobserved_cycle: None,
        cycle,
    })
}

fn verdict_or_undetermined(model: &FdesModel, sigma: EventId, i: FailureTypeId) -> SigmaVerdict {
    match check_wrt(model, sigma, i) {
        Ok(v) => v,
        Err(Error::A2Violated { cycle, .. }) => SigmaVerdict {
            sigma: model.event_name(sigma).to_string(),
            sigma_id: sigma,
            diagnosable: None,
            a2_status: A2Status::Violated,
            witness: None,
            delay: None,
            unobserved_cycle: Some(cycle),
            cycle: None,
        },
        Err(e) => unreachable!("diagnoser construction only refuses on A2: {e}"),
    }
}

fn report(model: &FdesModel, i: FailureTypeId, per_sigma: Vec<SigmaVerdict>) -> VerdictReport {
    VerdictReport {
        failure_type: model.failure_type_name(i).to_string(),
        type_id: i,
        aggregate: aggregate(&per_sigma),
        per_sigma,
    }
}

/// Type-i diagnosability over every σ ∈ Σ_fail_i.
pub fn check_type(model: &FdesModel, i: FailureTypeId) -> VerdictReport {
    check_type_with(model, i, Execution::Sequential)
}

pub fn check_type_with(model: &FdesModel, i: FailureTypeId, exec: Execution) -> VerdictReport {
    let sigmas = failure_events(model, i);
    let per_sigma = exec.map(&sigmas, |&s| verdict_or_undetermined(model, s, i));
    report(model, i, per_sigma)
}

/// A single-σ report, used when the caller names the reference event.
pub fn check_sigma(model: &FdesModel, i: FailureTypeId, sigma: EventId) -> VerdictReport {
    report(model, i, vec![verdict_or_undetermined(model, sigma, i)])
}

/// Reports for every failure type, one (type, σ) pair per task.
pub fn check_all(model: &FdesModel, exec: Execution) -> Vec<VerdictReport> {
    let tasks: Vec<(FailureTypeId, EventId)> = model
        .failure_types()
        .flat_map(|i| failure_events(model, i).into_iter().map(move |s| (i, s)))
        .collect();
    let mut results = exec
        .map(&tasks, |&(i, s)| verdict_or_undetermined(model, s, i))
        .into_iter();
    model
        .failure_types()
        .map(|i| {
            let n = tasks.iter().filter(|(t, _)| *t == i).count();
            report(model, i, results.by_ref().take(n).collect())
        })
        .collect()
}

/// Fills `delay` for every diagnosable σ on which the oracle certifies one.
pub fn attach_delays(
    model: &FdesModel,
    report: &mut VerdictReport,
    bounds: OracleBounds,
    exec: Execution,
) -> Result<()> {
    let i = report.type_id;
    let outcomes = exec.map(&report.per_sigma, |v| {
        if v.diagnosable == Some(true) {
            oracle_check(model, v.sigma_id, i, bounds).map(Some)
        } else {
            Ok(None)
        }
    });
    for (v, outcome) in report.per_sigma.iter_mut().zip(outcomes) {
        if let Some(OracleOutcome::HoldsWithDelay(n)) = outcome? {
            v.delay = Some(n);
        }
    }
    Ok(())
}

/// Oracle outcomes for every (type, σ ∈ Σ_fail_i) pair.
pub fn oracle_sweep(
    model: &FdesModel,
    bounds: OracleBounds,
    exec: Execution,
) -> Result<Vec<(FailureTypeId, EventId, OracleOutcome)>> {
    let tasks: Vec<(FailureTypeId, EventId)> = model
        .failure_types()
        .flat_map(|i| failure_events(model, i).into_iter().map(move |s| (i, s)))
        .collect();
    exec.map(&tasks, |&(i, s)| {
        oracle_check(model, s, i, bounds).map(|o| (i, s, o))
    })
    .into_iter()
    .collect()
}

/// Whether `(s, t, ω)` breaks the delay condition for delay `n`: `s` ends
/// in an event at least as faulty as σ, `st` is possible with `|t| ≥ n`,
/// `ω` is a possible string with the same σ-projection as `st`, and `ω` is
/// strictly less faulty than σ.
pub fn violates_delay(
    model: &FdesModel,
    sigma: EventId,
    i: FailureTypeId,
    cx: &Counterexample,
    n: usize,
) -> bool {
    let threshold = model.failure_degree(sigma, i);
    let st = cx.s.concat(&cx.t);
    let ends_faulty =
        cx.s.last()
            .is_some_and(|e| model.failure_degree(e, i) >= threshold);
    ends_faulty
        && cx.t.len() >= n
        && model.language_positive(&st)
        && !cx.omega.is_empty()
        && model.language_positive(&cx.omega)
        && model.sigma_project(&st, sigma) == model.sigma_project(&cx.omega, sigma)
        && model.failure_profile(&cx.omega).get(i) < threshold
}

/// Builds a counterexample from an indeterminate cycle pumped `k` times:
/// the faulty string is cut after its first event reaching the threshold
/// and the normal string serves as ω.
pub fn pumped_counterexample(
    model: &FdesModel,
    sigma: EventId,
    c: &IndeterminateCycle,
    k: usize,
) -> Option<Counterexample> {
    let i = c.failure_type;
    let threshold = model.failure_degree(sigma, i);
    let (faulty, normal) = c.pump(k);
    let cut = faulty
        .events()
        .iter()
        .position(|&e| model.failure_degree(e, i) >= threshold)?;
    let (s, t) = faulty.events().split_at(cut + 1);
    Some(Counterexample {
        s: Trace::new(s.to_vec()),
        t: Trace::new(t.to_vec()),
        omega: normal,
    })
}
