//! Fixtures, random model generators and independent reference checks for
//! testing `fdes-core`.

pub mod properties;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;

use fdes_core::model::{EventDocument, ModelDocument};
use fdes_core::{
    DegreeProfile, EventId, EventMatrix, FailureTypeId, FdesModel, FuzzyStateVec, PossDegree,
    StateId,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Loads `fixtures/<name>.json`, panicking on any error.
pub fn fixture(name: &str) -> FdesModel {
    FdesModel::from_json(&fixture_text(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn deg(text: &str) -> PossDegree {
    text.parse().expect("valid degree literal")
}

/// Shape limits for random models.
#[derive(Clone, Copy, Debug)]
pub struct RandomShape {
    pub max_states: usize,
    pub max_events: usize,
    pub max_types: usize,
    /// Probability that a given (state, event) edge is attempted.
    pub edge_probability: f64,
    /// Probability of reusing an existing state with the same vector.
    pub reuse_probability: f64,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            max_states: 6,
            max_events: 5,
            max_types: 2,
            edge_probability: 0.45,
            reuse_probability: 0.7,
        }
    }
}

fn grid<R: Rng>(rng: &mut R, crisp: bool) -> PossDegree {
    if crisp {
        if rng.gen_bool(0.5) {
            PossDegree::ONE
        } else {
            PossDegree::ZERO
        }
    } else {
        PossDegree::from_per_mille(200 * rng.gen_range(0..=5u16)).expect("grid value")
    }
}

/// Degree at most `bound`, drawn from the same grid.
fn grid_below<R: Rng>(rng: &mut R, bound: PossDegree, crisp: bool) -> PossDegree {
    loop {
        let d = grid(rng, crisp);
        if d <= bound {
            return d;
        }
    }
}

/// Generates a valid model by exploring from q0: each attempted edge
/// computes the max-min image, links to an existing state with that vector
/// or creates a new one while room remains.
pub fn random_model<R: Rng>(rng: &mut R, shape: RandomShape, crisp: bool) -> FdesModel {
    let dimension = rng.gen_range(2..=3);
    let n_events = rng.gen_range(2..=shape.max_events);
    let n_types = rng.gen_range(1..=shape.max_types);
    let types: Vec<String> = (1..=n_types).map(|i| format!("f{i}")).collect();

    let mut events = Vec::new();
    for k in 0..n_events {
        let matrix: Vec<Vec<PossDegree>> = (0..dimension)
            .map(|_| (0..dimension).map(|_| grid(rng, crisp)).collect())
            .collect();
        let observability = if crisp && k == 0 {
            PossDegree::ONE
        } else {
            grid(rng, crisp)
        };
        let bound = observability.complement();
        let failures = types
            .iter()
            .map(|t| (t.clone(), grid_below(rng, bound, crisp)))
            .collect();
        events.push((
            format!("e{k}"),
            EventDocument {
                matrix,
                observability,
                failures,
            },
        ));
    }

    let q0: Vec<PossDegree> = loop {
        let v: Vec<PossDegree> = (0..dimension).map(|_| grid(rng, crisp)).collect();
        if v.iter().any(|d| !d.is_zero()) {
            break v;
        }
    };
    let mut vectors = vec![q0];
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        for (k, (_, ev)) in events.iter().enumerate() {
            if !rng.gen_bool(shape.edge_probability) {
                continue;
            }
            let m = EventMatrix::from_rows(ev.matrix.clone()).expect("square");
            let v = fdes_core::possibility::max_min_compose(
                &FuzzyStateVec::new(vectors[q].clone()),
                &m,
            )
            .expect("dimensions agree");
            if !v.is_positive() {
                continue;
            }
            let v = v.entries().to_vec();
            let same: Vec<usize> = (0..vectors.len()).filter(|&j| vectors[j] == v).collect();
            let full = vectors.len() >= shape.max_states;
            let target = if !same.is_empty() && (full || rng.gen_bool(shape.reuse_probability)) {
                *same.choose(rng).expect("non-empty")
            } else if !full {
                vectors.push(v);
                queue.push_back(vectors.len() - 1);
                vectors.len() - 1
            } else {
                continue;
            };
            transitions.push((format!("q{q}"), format!("e{k}"), format!("q{target}")));
        }
    }

    let doc = ModelDocument {
        dimension,
        states: vectors
            .into_iter()
            .enumerate()
            .map(|(j, v)| (format!("q{j}"), v))
            .collect(),
        initial: "q0".to_string(),
        events: events.into_iter().collect(),
        failure_types: types,
        transitions,
    };
    let model = FdesModel::from_document(&doc).expect("generated model is well formed");
    assert!(model.validate().is_valid(), "generated model is consistent");
    model
}

pub fn random_fuzzy_model<R: Rng>(rng: &mut R) -> FdesModel {
    random_model(rng, RandomShape::default(), false)
}

/// A crisp model (every degree 0 or 1) with at least one observable event
/// and no reachable cycle of unobservable events.
pub fn random_crisp_model<R: Rng>(rng: &mut R) -> FdesModel {
    loop {
        let m = random_model(rng, RandomShape::default(), true);
        let unobservable_cycle = m
            .events()
            .any(|e| m.check_a2(e) != fdes_core::A2Status::Strict);
        let faulty = m
            .failure_types()
            .any(|i| m.events().any(|e| !m.failure_degree(e, i).is_zero()));
        if !unobservable_cycle && faulty {
            return m;
        }
    }
}

/// Classical diagnosability of a crisp model by cycle search in the twin
/// plant: pairs of runs synchronised on observable events, each tracking
/// whether a fault event of type `i` has occurred. The type is not
/// diagnosable iff a reachable cycle keeps one run faulty and the other not.
pub fn classical_diagnosable(model: &FdesModel, i: FailureTypeId) -> bool {
    let observable = |e: EventId| model.observability(e) == PossDegree::ONE;
    let fault = |e: EventId| model.failure_degree(e, i) == PossDegree::ONE;
    type Node = (StateId, bool, StateId, bool);
    let start: Node = (model.initial(), false, model.initial(), false);
    let mut nodes = vec![start];
    let mut index = std::collections::HashMap::from([(start, 0usize)]);
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut k = 0;
    while k < nodes.len() {
        let (x1, f1, x2, f2) = nodes[k];
        let mut next = Vec::new();
        for e in model.events() {
            if observable(e) {
                if let (Some(y1), Some(y2)) = (model.step(x1, e), model.step(x2, e)) {
                    next.push((y1, f1 || fault(e), y2, f2 || fault(e)));
                }
            } else {
                if let Some(y1) = model.step(x1, e) {
                    next.push((y1, f1 || fault(e), x2, f2));
                }
                if let Some(y2) = model.step(x2, e) {
                    next.push((x1, f1, y2, f2 || fault(e)));
                }
            }
        }
        let mut out = Vec::new();
        for n in next {
            let id = *index.entry(n).or_insert_with(|| {
                nodes.push(n);
                nodes.len() - 1
            });
            out.push(id);
        }
        succ.push(out);
        k += 1;
    }
    // Cycle among (F, N) nodes by iterative peeling of nodes without
    // successors inside the set.
    let mut alive: Vec<bool> = nodes.iter().map(|&(_, f1, _, f2)| f1 && !f2).collect();
    loop {
        let mut changed = false;
        for n in 0..nodes.len() {
            if alive[n] && !succ[n].iter().any(|&m| alive[m]) {
                alive[n] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    !alive.iter().any(|&a| a)
}

/// `L_a(q, σ)` summaries by direct string enumeration: every string `u a`
/// of length at most `max_len` with `u` non-qualifying, reduced to (target
/// state, failure profile).
pub fn enumerate_l_a(
    model: &FdesModel,
    q: StateId,
    sigma: EventId,
    a: EventId,
    max_len: usize,
) -> BTreeSet<(StateId, DegreeProfile)> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<(StateId, Vec<EventId>)> = vec![(q, Vec::new())];
    while let Some((p, u)) = stack.pop() {
        if u.len() >= max_len {
            continue;
        }
        if let Some(t) = model.step(p, a) {
            let mut s = u.clone();
            s.push(a);
            out.insert((t, model.failure_profile(&s.into())));
        }
        for e in model.events() {
            if model.qualifies(e, sigma) {
                continue;
            }
            if let Some(t) = model.step(p, e) {
                let mut u2 = u.clone();
                u2.push(e);
                stack.push((t, u2));
            }
        }
    }
    out
}

/// Every simple cycle of a directed graph given by successor lists, each as
/// the list of nodes visited (first node not repeated).
pub fn simple_cycles(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut cycles = HashSet::new();
    let mut out = Vec::new();
    for start in 0..succ.len() {
        let mut path = vec![start];
        let mut iters = vec![0usize];
        while let Some(&node) = path.last() {
            let it = iters.last_mut().expect("parallel stacks");
            if *it < succ[node].len() {
                let next = succ[node][*it];
                *it += 1;
                if next == start {
                    if cycles.insert(path.clone()) {
                        out.push(path.clone());
                    }
                } else if next > start && !path.contains(&next) {
                    path.push(next);
                    iters.push(0);
                }
            } else {
                path.pop();
                iters.pop();
            }
        }
    }
    out
}
