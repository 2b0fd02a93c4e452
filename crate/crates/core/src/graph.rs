//! Small adjacency-list digraph with SCC-based cycle search.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

#[derive(Clone, Debug)]
pub(crate) struct Digraph<L> {
    adj: Vec<Vec<(usize, L)>>,
}

impl<L: Clone> Digraph<L> {
    pub(crate) fn with_nodes(n: usize) -> Self {
        Digraph {
            adj: vec![Vec::new(); n],
        }
    }

    pub(crate) fn add_edge(&mut self, from: usize, to: usize, label: L) {
        self.adj[from].push((to, label));
    }

    pub(crate) fn successors(&self, n: usize) -> &[(usize, L)] {
        &self.adj[n]
    }

    /// Component id per node, plus whether each component contains an edge
    /// (more than one node, or a self-loop).
    pub(crate) fn cyclic_components(&self) -> (Vec<usize>, Vec<bool>) {
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(self.adj.len(), 0);
        for _ in 0..self.adj.len() {
            g.add_node(());
        }
        for (from, outs) in self.adj.iter().enumerate() {
            for (to, _) in outs {
                g.add_edge(NodeIndex::new(from), NodeIndex::new(*to), ());
            }
        }
        let mut comp = vec![0; self.adj.len()];
        let mut cyclic = Vec::new();
        for (id, members) in tarjan_scc(&g).into_iter().enumerate() {
            let has_edge = members.len() > 1
                || self.adj[members[0].index()]
                    .iter()
                    .any(|(to, _)| *to == members[0].index());
            for m in members {
                comp[m.index()] = id;
            }
            cyclic.push(has_edge);
        }
        (comp, cyclic)
    }

    /// Shortest cycle through `start` staying inside `start`'s component, as
    /// the list of edges `(from, label, to)`.
    pub(crate) fn shortest_cycle_through(
        &self,
        start: usize,
        comp: &[usize],
    ) -> Option<Vec<(usize, L, usize)>> {
        let c = comp[start];
        let mut parent: Vec<Option<(usize, L)>> = vec![None; self.adj.len()];
        let mut visited = vec![false; self.adj.len()];
        let mut queue = VecDeque::new();
        for (to, label) in &self.adj[start] {
            if comp[*to] != c {
                continue;
            }
            if *to == start {
                return Some(vec![(start, label.clone(), start)]);
            }
            if !visited[*to] {
                visited[*to] = true;
                parent[*to] = Some((start, label.clone()));
                queue.push_back(*to);
            }
        }
        while let Some(n) = queue.pop_front() {
            for (to, label) in &self.adj[n] {
                if comp[*to] != c {
                    continue;
                }
                if *to == start {
                    let mut edges = vec![(n, label.clone(), start)];
                    let mut cur = n;
                    while cur != start {
                        let (p, l) = parent[cur].clone().expect("BFS parent");
                        edges.push((p, l, cur));
                        cur = p;
                    }
                    edges.reverse();
                    return Some(edges);
                }
                if !visited[*to] {
                    visited[*to] = true;
                    parent[*to] = Some((n, label.clone()));
                    queue.push_back(*to);
                }
            }
        }
        None
    }
}
