//! Prior-knowledge pair constraints and their encoding for the optimizer.
//!
//! Must-link groups are contracted into super-nodes whose internal edge
//! weight becomes a recorded self-weight (it keeps contributing to visit
//! rates through strength); cannot-link pairs become forbidden
//! co-memberships, and any direct edge between such a pair is removed from
//! the working graph.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::IngredientNetwork;

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Must-link and cannot-link ingredient pairs.
///
/// Conflict-free by construction: after transitively closing must-link, no
/// cannot-link pair may end up inside one group.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    must: BTreeSet<(String, String)>,
    cannot: BTreeSet<(String, String)>,
}

impl ConstraintSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<I, J>(must: I, cannot: J) -> Result<Self>
    where
        I: IntoIterator<Item = (String, String)>,
        J: IntoIterator<Item = (String, String)>,
    {
        let mut set = Self::default();
        for (a, b) in must {
            if a == b {
                return Err(Error::SelfConstraint { id: a });
            }
            set.must.insert(ordered(&a, &b));
        }
        for (a, b) in cannot {
            if a == b {
                return Err(Error::SelfConstraint { id: a });
            }
            set.cannot.insert(ordered(&a, &b));
        }
        set.check_conflicts()?;
        Ok(set)
    }

    pub fn must_link(&self) -> &BTreeSet<(String, String)> {
        &self.must
    }

    pub fn cannot_link(&self) -> &BTreeSet<(String, String)> {
        &self.cannot
    }

    pub fn is_empty(&self) -> bool {
        self.must.is_empty() && self.cannot.is_empty()
    }

    fn check_conflicts(&self) -> Result<()> {
        let mut groups = UnionFind::default();
        for (a, b) in &self.must {
            groups.union(a, b);
        }
        for (a, b) in &self.cannot {
            if groups.joined(a, b) {
                return Err(Error::ConflictingConstraints {
                    a: a.clone(),
                    b: b.clone(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct UnionFind {
    index: BTreeMap<String, usize>,
    parent: Vec<usize>,
}

impl UnionFind {
    fn slot(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.parent.len();
        self.index.insert(id.to_string(), i);
        self.parent.push(i);
        i
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: &str, b: &str) {
        let (ia, ib) = (self.slot(a), self.slot(b));
        let (ra, rb) = (self.find(ia), self.find(ib));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn joined(&mut self, a: &str, b: &str) -> bool {
        match (self.index.get(a).copied(), self.index.get(b).copied()) {
            (Some(ia), Some(ib)) => self.find(ia) == self.find(ib),
            _ => false,
        }
    }
}

/// The optimizer's view of a network after constraint encoding: contracted
/// super-nodes, their working edges and the forbidden co-membership pairs.
#[derive(Debug, Clone)]
pub struct ConstrainedContext {
    /// Original node ids per super-node, sorted; super-nodes are ordered by
    /// their smallest member.
    members: Vec<Vec<String>>,
    group_of: BTreeMap<String, usize>,
    /// Working edges between distinct super-nodes.
    edges: BTreeMap<(usize, usize), f64>,
    /// Contracted internal weight per super-node.
    self_weight: Vec<f64>,
    /// Super-node pairs that must not share a module.
    forbidden: BTreeSet<(usize, usize)>,
    /// Constraint pairs dropped because an endpoint is not in the network.
    pub dropped_pairs: usize,
}

impl ConstrainedContext {
    pub fn super_count(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self, super_node: usize) -> &[String] {
        &self.members[super_node]
    }

    pub fn group_of(&self, node: &str) -> Option<usize> {
        self.group_of.get(node).copied()
    }

    pub fn self_weight(&self, super_node: usize) -> f64 {
        self.self_weight[super_node]
    }

    pub fn edge_weight(&self, a: usize, b: usize) -> Option<f64> {
        self.edges.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn forbidden_pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.forbidden
    }

    /// Total working edge weight, counting self-weights once.
    pub(crate) fn total_weight(&self) -> f64 {
        self.edges.values().sum::<f64>() + self.self_weight.iter().sum::<f64>()
    }

    /// Visit-rate mass per super-node: strength/2W with self-weights counted
    /// twice, so a contracted group carries exactly the mass of its members.
    pub(crate) fn masses(&self) -> Vec<f64> {
        let two_w = 2.0 * self.total_weight();
        let mut strength: Vec<f64> = self.self_weight.iter().map(|w| 2.0 * w).collect();
        for (&(a, b), &w) in &self.edges {
            strength[a] += w;
            strength[b] += w;
        }
        if two_w == 0.0 {
            return vec![0.0; self.members.len()];
        }
        strength.into_iter().map(|s| s / two_w).collect()
    }

    /// Adjacency between distinct super-nodes in normalized flow units.
    pub(crate) fn flow_adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let two_w = 2.0 * self.total_weight();
        let mut adj = vec![Vec::new(); self.members.len()];
        for (&(a, b), &w) in &self.edges {
            adj[a].push((b, w / two_w));
            adj[b].push((a, w / two_w));
        }
        adj
    }

    /// Forbidden partners per super-node.
    pub(crate) fn forbidden_partners(&self) -> Vec<Vec<usize>> {
        let mut partners = vec![Vec::new(); self.members.len()];
        for &(a, b) in &self.forbidden {
            partners[a].push(b);
            partners[b].push(a);
        }
        partners
    }
}

/// Encode a constraint set against a network.
///
/// Constraint pairs touching nodes the network does not contain are dropped
/// (counted in `dropped_pairs`). Conflicting surviving constraints are an
/// error naming the offending pair.
pub fn apply_constraints(
    network: &IngredientNetwork,
    constraints: &ConstraintSet,
) -> Result<ConstrainedContext> {
    let mut dropped = 0;
    let present =
        |pair: &&(String, String)| network.contains_node(&pair.0) && network.contains_node(&pair.1);
    let must: Vec<&(String, String)> = constraints.must.iter().filter(present).collect();
    let cannot: Vec<&(String, String)> = constraints.cannot.iter().filter(present).collect();
    dropped += constraints.must.len() - must.len();
    dropped += constraints.cannot.len() - cannot.len();

    let mut groups = UnionFind::default();
    for node in network.nodes() {
        groups.slot(node);
    }
    for (a, b) in &must {
        groups.union(a, b);
    }
    for (a, b) in &cannot {
        if groups.joined(a, b) {
            return Err(Error::ConflictingConstraints {
                a: a.clone(),
                b: b.clone(),
            });
        }
    }

    // Index super-nodes by their smallest member; network nodes come out of
    // the BTreeMap in lexicographic order, so roots are discovered smallest
    // first.
    let mut group_of: BTreeMap<String, usize> = BTreeMap::new();
    let mut members: Vec<Vec<String>> = Vec::new();
    let mut root_to_group: BTreeMap<usize, usize> = BTreeMap::new();
    for node in network.nodes() {
        let slot = groups.slot(node);
        let root = groups.find(slot);
        let group = *root_to_group.entry(root).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[group].push(node.to_string());
        group_of.insert(node.to_string(), group);
    }

    let cannot_edges: BTreeSet<(String, String)> = cannot.iter().map(|p| (*p).clone()).collect();
    let mut edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut self_weight = vec![0.0; members.len()];
    for (a, b, w) in network.edges() {
        if cannot_edges.contains(&ordered(a, b)) {
            continue; // direct edge between a cannot-link pair is removed
        }
        let (ga, gb) = (group_of[a], group_of[b]);
        if ga == gb {
            self_weight[ga] += w;
        } else {
            *edges.entry((ga.min(gb), ga.max(gb))).or_insert(0.0) += w;
        }
    }

    let forbidden = cannot
        .iter()
        .map(|(a, b)| {
            let (ga, gb) = (group_of[a.as_str()], group_of[b.as_str()]);
            (ga.min(gb), ga.max(gb))
        })
        .collect();

    Ok(ConstrainedContext {
        members,
        group_of,
        edges,
        self_weight,
        forbidden,
        dropped_pairs: dropped,
    })
}
