//! Weighted undirected ingredient network, local filtration and degree statistics.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

/// Simple undirected weighted graph over ingredient identifiers.
///
/// Pairs are unordered, self-loops are rejected and zero-weight pairs are
/// absent rather than stored. Iteration order is lexicographic everywhere,
/// which is what the pipeline's determinism contracts lean on.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngredientNetwork {
    // adjacency is mirrored: adj[a][b] == adj[b][a]; every node has an entry
    adj: BTreeMap<String, BTreeMap<String, f64>>,
    edge_count: usize,
}

impl IngredientNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    /// Ensure a node exists (possibly isolated).
    pub fn add_node(&mut self, id: &str) {
        self.adj.entry(id.to_string()).or_default();
    }

    /// Set the weight of an undirected edge, creating endpoints as needed.
    ///
    /// Panics on self-loops and non-positive weights; both violate the type's
    /// invariants and indicate a caller bug rather than bad input data.
    pub fn set_edge(&mut self, a: &str, b: &str, weight: f64) {
        assert!(a != b, "self-loop {a}-{a} is not representable");
        assert!(weight > 0.0, "edge {a}-{b} must have positive weight");
        self.add_node(a);
        self.add_node(b);
        let fresh = self
            .adj
            .get_mut(a)
            .unwrap()
            .insert(b.to_string(), weight)
            .is_none();
        self.adj.get_mut(b).unwrap().insert(a.to_string(), weight);
        if fresh {
            self.edge_count += 1;
        }
    }

    /// Add `delta` to an edge's weight, creating it at `delta` if absent.
    pub fn bump_edge(&mut self, a: &str, b: &str, delta: f64) {
        let current = self.weight(a, b).unwrap_or(0.0);
        self.set_edge(a, b, current + delta);
    }

    /// Remove an edge if present. Endpoints stay, possibly isolated.
    pub fn remove_edge(&mut self, a: &str, b: &str) {
        let removed = self
            .adj
            .get_mut(a)
            .map(|n| n.remove(b).is_some())
            .unwrap_or(false);
        if removed {
            self.adj.get_mut(b).unwrap().remove(a);
            self.edge_count -= 1;
        }
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.adj.contains_key(id)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = &str> {
        self.adj.keys().map(String::as_str)
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<f64> {
        self.adj.get(a).and_then(|n| n.get(b)).copied()
    }

    pub fn degree(&self, id: &str) -> usize {
        self.adj.get(id).map_or(0, BTreeMap::len)
    }

    /// Sum of incident edge weights.
    pub fn strength(&self, id: &str) -> f64 {
        self.adj.get(id).map_or(0.0, |n| n.values().sum())
    }

    /// Maximum incident edge weight, or `None` for isolated/absent nodes.
    pub fn max_incident_weight(&self, id: &str) -> Option<f64> {
        self.adj
            .get(id)
            .and_then(|n| n.values().copied().reduce(f64::max))
    }

    pub fn neighbors(&self, id: &str) -> impl Iterator<Item = (&str, f64)> {
        self.adj
            .get(id)
            .into_iter()
            .flat_map(|n| n.iter().map(|(k, w)| (k.as_str(), *w)))
    }

    /// Iterate every edge once as (a, b, weight) with a < b, lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.adj.iter().flat_map(|(a, neighbors)| {
            neighbors
                .iter()
                .filter(move |(b, _)| a < *b)
                .map(move |(b, w)| (a.as_str(), b.as_str(), *w))
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    /// Local filtration: keep edge (u, v) of weight w iff
    /// w >= factor * w_max(u) or w >= factor * w_max(v), with w_max taken from
    /// this (input) network. Nodes are never deleted; the input is untouched.
    pub fn filter_local(&self, factor: f64) -> Result<IngredientNetwork> {
        if !(0.0..=1.0).contains(&factor) {
            return Err(Error::OutOfRange {
                name: "filtration factor",
                value: factor,
                min: 0.0,
                max: 1.0,
            });
        }
        let mut filtered = IngredientNetwork::new();
        for node in self.adj.keys() {
            filtered.add_node(node);
        }
        let threshold: BTreeMap<&str, f64> = self
            .adj
            .keys()
            .filter_map(|n| self.max_incident_weight(n).map(|m| (n.as_str(), factor * m)))
            .collect();
        for (a, b, w) in self.edges() {
            if w >= threshold[a] || w >= threshold[b] {
                filtered.set_edge(a, b, w);
            }
        }
        Ok(filtered)
    }

    /// Maximal connected node sets, ordered by their smallest member.
    pub fn connected_components(&self) -> Vec<BTreeSet<String>> {
        let mut components = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for start in self.adj.keys() {
            if seen.contains(start.as_str()) {
                continue;
            }
            let mut component = BTreeSet::new();
            let mut queue = VecDeque::from([start.as_str()]);
            seen.insert(start);
            while let Some(node) = queue.pop_front() {
                component.insert(node.to_string());
                for (next, _) in self.neighbors(node) {
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
            components.push(component);
        }
        // BTreeMap key order makes `start` the smallest unvisited node, so
        // components already come out sorted by smallest member.
        components
    }

    pub fn degree_histogram(&self) -> DegreeHistogram {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for node in self.adj.keys() {
            *counts.entry(self.degree(node)).or_insert(0) += 1;
        }
        DegreeHistogram::from_counts(counts, self.node_count(), self.edge_count())
    }
}

/// Degree distribution with the summary statistics reported alongside it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeHistogram {
    pub counts: BTreeMap<usize, usize>,
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub density: f64,
}

impl DegreeHistogram {
    fn from_counts(counts: BTreeMap<usize, usize>, nodes: usize, edges: usize) -> Self {
        Self {
            counts,
            nodes,
            edges,
            mean_degree: mean_degree(nodes, edges),
            density: density(nodes, edges),
        }
    }
}

/// 2|E| / |V|, or 0 for the empty graph.
pub fn mean_degree(nodes: usize, edges: usize) -> f64 {
    if nodes == 0 {
        0.0
    } else {
        2.0 * edges as f64 / nodes as f64
    }
}

/// 2|E| / (|V| (|V|-1)) for |V| >= 2, else 0.
pub fn density(nodes: usize, edges: usize) -> f64 {
    if nodes < 2 {
        0.0
    } else {
        2.0 * edges as f64 / (nodes as f64 * (nodes as f64 - 1.0))
    }
}
