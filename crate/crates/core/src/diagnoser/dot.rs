//! Graphviz export.

use std::fmt::Write;

use super::{fault_tag, Certainty, Diagnoser};
use crate::model::{FailureTypeId, FdesModel};

const PALETTE: [&str; 6] = ["red", "blue", "darkgreen", "darkorange", "purple", "brown"];

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl Diagnoser {
    /// DOT rendering in discovery order. States uncertain for any of
    /// `types` are outlined in the first such type's colour and annotated
    /// with the list of uncertain types.
    pub fn to_dot(&self, model: &FdesModel, types: &[FailureTypeId]) -> String {
        let mut out = String::new();
        let sigma = escape(model.event_name(self.sigma()));
        writeln!(out, "digraph diagnoser {{").unwrap();
        writeln!(out, "  label=\"diagnoser w.r.t. {sigma}\";").unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  node [shape=box];").unwrap();
        writeln!(out, "  init [shape=point];").unwrap();
        for (k, chi) in self.states().iter().enumerate() {
            let label = escape(&chi.display(model));
            let uncertain: Vec<FailureTypeId> = types
                .iter()
                .copied()
                .filter(|&i| chi.classify(i) == Certainty::Uncertain)
                .collect();
            match uncertain.first() {
                None => writeln!(out, "  d{k} [label=\"{label}\"];").unwrap(),
                Some(first) => {
                    let colour = PALETTE[first.index() % PALETTE.len()];
                    let tags: Vec<String> = uncertain
                        .iter()
                        .map(|&i| fault_tag(model.failure_type_name(i)))
                        .collect();
                    writeln!(
                        out,
                        "  d{k} [label=\"{label}\", color={colour}, penwidth=2, xlabel=\"uncertain: {}\"];",
                        escape(&tags.join(","))
                    )
                    .unwrap();
                }
            }
        }
        writeln!(out, "  init -> d0;").unwrap();
        for &(from, a, to) in self.edges() {
            writeln!(
                out,
                "  d{from} -> d{to} [label=\"{}\"];",
                escape(model.event_name(a))
            )
            .unwrap();
        }
        writeln!(out, "}}").unwrap();
        out
    }
}
