//! F_i-indeterminate cycle search.
//!
//! Nodes of the search graph are triples (χ, x, y) with χ an F_i-uncertain
//! diagnoser state, x a pair of χ carrying F_i and y a pair of χ without it.
//! An edge on `a` follows δ_d to another uncertain state while moving x and
//! y along concrete strings of `L_a`. A cycle in this graph is an
//! indeterminate cycle: the diagnoser cycle together with a faulty and a
//! normal model cycle that share its observations.

use std::collections::{HashMap, VecDeque};

use super::{label_propagate, pair_display, Certainty, Diagnoser, LabelSet};
use crate::graph::Digraph;
use crate::model::{EventId, FailureTypeId, FdesModel, SilentStep, StateId, Trace};

type Pair = (StateId, LabelSet);

/// One observation of the cycle: the diagnoser move and the strings that
/// carry the faulty and the normal pair along it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleStep {
    pub event: EventId,
    pub from: usize,
    pub to: usize,
    pub faulty: Pair,
    pub normal: Pair,
    pub faulty_string: Trace,
    pub normal_string: Trace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndeterminateCycle {
    pub failure_type: FailureTypeId,
    /// Diagnoser state where the cycle starts and ends.
    pub start: usize,
    pub faulty_start: Pair,
    pub normal_start: Pair,
    /// Strings from q0 realizing the two start pairs; they share a projection.
    pub faulty_prefix: Trace,
    pub normal_prefix: Trace,
    pub steps: Vec<CycleStep>,
}

impl IndeterminateCycle {
    /// Diagnoser states visited, starting and ending at `start`.
    pub fn diagnoser_states(&self) -> Vec<usize> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|s| s.to))
            .collect()
    }

    pub fn observed(&self) -> Vec<EventId> {
        self.steps.iter().map(|s| s.event).collect()
    }

    pub fn faulty_pairs(&self) -> Vec<Pair> {
        std::iter::once(self.faulty_start.clone())
            .chain(self.steps.iter().map(|s| s.faulty.clone()))
            .collect()
    }

    pub fn normal_pairs(&self) -> Vec<Pair> {
        std::iter::once(self.normal_start.clone())
            .chain(self.steps.iter().map(|s| s.normal.clone()))
            .collect()
    }

    pub fn faulty_loop(&self) -> Trace {
        self.steps
            .iter()
            .fold(Trace::empty(), |acc, s| acc.concat(&s.faulty_string))
    }

    pub fn normal_loop(&self) -> Trace {
        self.steps
            .iter()
            .fold(Trace::empty(), |acc, s| acc.concat(&s.normal_string))
    }

    /// `(prefix_x · loop_x^k, prefix_y · loop_y^k)`.
    pub fn pump(&self, k: usize) -> (Trace, Trace) {
        let (fl, nl) = (self.faulty_loop(), self.normal_loop());
        let mut f = self.faulty_prefix.clone();
        let mut n = self.normal_prefix.clone();
        for _ in 0..k {
            f = f.concat(&fl);
            n = n.concat(&nl);
        }
        (f, n)
    }

    pub fn describe(&self, model: &FdesModel, d: &Diagnoser) -> String {
        let states: Vec<String> = self
            .diagnoser_states()
            .iter()
            .map(|&k| format!("[{}]", d.state(k).display(model)))
            .collect();
        let fmt_pairs = |ps: Vec<Pair>| {
            ps.iter()
                .map(|(q, l)| pair_display(model, *q, l))
                .collect::<Vec<_>>()
                .join(" -> ")
        };
        format!(
            "diagnoser cycle: {}\nevents: {}\nfaulty run: {}\nnormal run: {}",
            states.join(" -> "),
            model.format_trace(&Trace::new(self.observed())),
            fmt_pairs(self.faulty_pairs()),
            fmt_pairs(self.normal_pairs()),
        )
    }
}

#[derive(Clone)]
struct Move {
    event: EventId,
    faulty_string: Trace,
    normal_string: Trace,
}

struct Stepper<'a> {
    model: &'a FdesModel,
    d: &'a Diagnoser,
    cache: HashMap<(StateId, EventId), Vec<SilentStep>>,
}

impl<'a> Stepper<'a> {
    fn paths(&mut self, q: StateId, a: EventId) -> &[SilentStep] {
        let (model, sigma) = (self.model, self.d.sigma());
        self.cache.entry((q, a)).or_insert_with(|| {
            model
                .reach_via_l_a_paths(q, sigma, a)
                .expect("Σ_d events qualify")
        })
    }

    /// Successors of one pair on `a`, each with its connecting string.
    fn advance(&mut self, pair: &Pair, a: EventId) -> Vec<(Pair, Trace)> {
        let (model, sigma) = (self.model, self.d.sigma());
        self.paths(pair.0, a)
            .to_vec()
            .into_iter()
            .map(|s| {
                (
                    (s.state, label_propagate(model, sigma, &pair.1, &s.profile)),
                    s.path,
                )
            })
            .collect()
    }
}

/// Searches for an F_i-indeterminate cycle in `d`. The witness is anchored
/// at the first cyclic node in discovery order and follows a shortest cycle
/// through it.
pub(super) fn find(
    model: &FdesModel,
    d: &Diagnoser,
    i: FailureTypeId,
) -> Option<IndeterminateCycle> {
    let mut nodes: Vec<(usize, usize, usize)> = Vec::new();
    let mut node_index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (k, chi) in d.states().iter().enumerate() {
        if chi.classify(i) != Certainty::Uncertain {
            continue;
        }
        for (xi, x) in chi.pairs().iter().enumerate() {
            if !x.1.contains(i) {
                continue;
            }
            for (yi, y) in chi.pairs().iter().enumerate() {
                if y.1.contains(i) {
                    continue;
                }
                node_index.insert((k, xi, yi), nodes.len());
                nodes.push((k, xi, yi));
            }
        }
    }
    if nodes.is_empty() {
        return None;
    }

    let mut stepper = Stepper {
        model,
        d,
        cache: HashMap::new(),
    };
    let mut graph: Digraph<Move> = Digraph::with_nodes(nodes.len());
    for (n, &(k, xi, yi)) in nodes.iter().enumerate() {
        for &a in d.events() {
            let Some(k2) = d.next(k, a) else { continue };
            if d.classify(k2, i) != Certainty::Uncertain {
                continue;
            }
            let target = d.state(k2);
            let xs = stepper.advance(&d.state(k).pairs()[xi], a);
            let ys = stepper.advance(&d.state(k).pairs()[yi], a);
            for (x2, xpath) in &xs {
                if !x2.1.contains(i) {
                    continue;
                }
                let xi2 = target
                    .pairs()
                    .iter()
                    .position(|p| p == x2)
                    .expect("δ_d contains every successor pair");
                for (y2, ypath) in &ys {
                    if y2.1.contains(i) {
                        continue;
                    }
                    let yi2 = target
                        .pairs()
                        .iter()
                        .position(|p| p == y2)
                        .expect("δ_d contains every successor pair");
                    let m = node_index[&(k2, xi2, yi2)];
                    graph.add_edge(
                        n,
                        m,
                        Move {
                            event: a,
                            faulty_string: xpath.clone(),
                            normal_string: ypath.clone(),
                        },
                    );
                }
            }
        }
    }

    let (comp, cyclic) = graph.cyclic_components();
    let anchor = (0..nodes.len()).find(|&n| cyclic[comp[n]])?;
    let edges = graph.shortest_cycle_through(anchor, &comp)?;

    let pair_of = |node: usize, which: usize| -> Pair {
        let (k, xi, yi) = nodes[node];
        d.state(k).pairs()[if which == 0 { xi } else { yi }].clone()
    };
    let steps = edges
        .into_iter()
        .map(|(from, mv, to)| CycleStep {
            event: mv.event,
            from: nodes[from].0,
            to: nodes[to].0,
            faulty: pair_of(to, 0),
            normal: pair_of(to, 1),
            faulty_string: mv.faulty_string,
            normal_string: mv.normal_string,
        })
        .collect();

    let (start, faulty_start, normal_start) =
        (nodes[anchor].0, pair_of(anchor, 0), pair_of(anchor, 1));
    let (faulty_prefix, normal_prefix) = realize(&mut stepper, start, &faulty_start, &normal_start)
        .expect("every diagnoser pair is generated by some string");
    Some(IndeterminateCycle {
        failure_type: i,
        start,
        faulty_start,
        normal_start,
        faulty_prefix,
        normal_prefix,
        steps,
    })
}

/// Breadth-first search from (χ0, (q0,N), (q0,N)) for two strings with a
/// common observation that reach the given pairs of diagnoser state `goal`.
fn realize(stepper: &mut Stepper<'_>, goal: usize, x: &Pair, y: &Pair) -> Option<(Trace, Trace)> {
    let d = stepper.d;
    let origin = (stepper.model.initial(), LabelSet::Normal);
    type Node = (usize, Pair, Pair);
    let start: Node = (d.initial(), origin.clone(), origin);
    let mut parent: HashMap<Node, Option<(Node, Trace, Trace)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    let target: Node = (goal, x.clone(), y.clone());
    while let Some(node) = queue.pop_front() {
        if node == target {
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            let mut cur = node;
            while let Some(Some((prev, xp, yp))) = parent.get(&cur).cloned() {
                xs.push(xp);
                ys.push(yp);
                cur = prev;
            }
            let join = |parts: Vec<Trace>| {
                parts
                    .into_iter()
                    .rev()
                    .fold(Trace::empty(), |acc, t| acc.concat(&t))
            };
            return Some((join(xs), join(ys)));
        }
        let (k, px, py) = &node;
        for &a in d.events() {
            let Some(k2) = d.next(*k, a) else { continue };
            let xs = stepper.advance(px, a);
            let ys = stepper.advance(py, a);
            for (x2, xpath) in &xs {
                for (y2, ypath) in &ys {
                    let next: Node = (k2, x2.clone(), y2.clone());
                    if !parent.contains_key(&next) {
                        parent.insert(
                            next.clone(),
                            Some((node.clone(), xpath.clone(), ypath.clone())),
                        );
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    None
}

impl Diagnoser {
    /// An F_i-indeterminate cycle, if one exists.
    pub fn find_indeterminate_cycle(
        &self,
        model: &FdesModel,
        i: FailureTypeId,
    ) -> Option<IndeterminateCycle> {
        find(model, self, i)
    }
}
