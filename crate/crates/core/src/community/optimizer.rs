//! Greedy map-equation minimizer: seeded local moves plus module aggregation.
//!
//! Each trial starts from singleton modules over the constrained super-node
//! graph, repeatedly moves nodes to the neighbouring module with the largest
//! codelength decrease (never co-locating a forbidden pair), then aggregates
//! modules into super-nodes and repeats until aggregation stops helping. The
//! best of `trials` independently seeded runs wins.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::community::codelength::{codelength_from_flows, plogp, ModuleFlow};
use crate::community::constraints::apply_constraints;
use crate::community::{codelength, ConstraintSet, Partition};
use crate::error::{Error, Result};
use crate::graph::IngredientNetwork;
use crate::seed;

/// A move must beat this margin to count as an improvement; ties keep the
/// current module.
const MIN_IMPROVEMENT: f64 = 1e-12;

/// One optimization level: aggregate nodes with their visit-rate masses,
/// inter-node flows and forbidden co-membership partners.
#[derive(Debug, Clone)]
struct Level {
    mass: Vec<f64>,
    adj: Vec<Vec<(usize, f64)>>,
    forbidden: Vec<Vec<usize>>,
}

impl Level {
    fn len(&self) -> usize {
        self.mass.len()
    }
}

struct PhaseResult {
    module_of: Vec<usize>,
    module_count: usize,
    codelength: f64,
    moved: usize,
}

/// Detect communities of `network` under `constraints`.
///
/// Runs `trials` seeded greedy optimizations and returns the partition with
/// the minimal codelength, expanded back to original nodes (contracted
/// must-link groups share one community, isolated nodes get their own). The
/// returned codelength is evaluated on `network` itself; it is 0 for an
/// edgeless network.
pub fn detect(
    network: &IngredientNetwork,
    constraints: &ConstraintSet,
    trials: usize,
    seed_value: u64,
) -> Result<Partition> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if network.node_count() == 0 {
        return Err(Error::EmptyNetwork);
    }
    let ctx = apply_constraints(network, constraints)?;

    let super_assignment = if ctx.edge_count() == 0 {
        (0..ctx.super_count()).collect()
    } else {
        let level = Level {
            mass: ctx.masses(),
            adj: ctx.flow_adjacency(),
            forbidden: ctx.forbidden_partners(),
        };
        let node_term: f64 = level.mass.iter().copied().map(plogp).sum();

        let mut best: Option<(Vec<usize>, f64)> = None;
        for trial in 0..trials {
            let mut rng = seed::rng_for(seed_value, "detect-trial", trial as u64);
            let (assignment, bits) = optimize_trial(&level, node_term, &mut rng);
            if best
                .as_ref()
                .is_none_or(|(_, b)| bits < b - MIN_IMPROVEMENT)
            {
                best = Some((assignment, bits));
            }
        }
        best.expect("at least one trial ran").0
    };

    let mut raw = BTreeMap::new();
    for (super_idx, &module) in super_assignment.iter().enumerate() {
        for member in ctx.members(super_idx) {
            raw.insert(member.clone(), module);
        }
    }
    let assignment = super::relabel(raw);

    let bits = if network.edge_count() == 0 {
        0.0
    } else {
        let provisional = Partition::new(assignment.clone(), 0.0)?;
        codelength(network, &provisional)?
    };
    Partition::new(assignment, bits)
}

fn optimize_trial(
    level0: &Level,
    node_term: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, f64) {
    let mut leaf_assignment: Vec<usize> = (0..level0.len()).collect();
    let mut level = level0.clone();

    loop {
        let phase = local_move_phase(&level, node_term, rng);
        if phase.moved == 0 {
            return (leaf_assignment, phase.codelength);
        }
        for slot in leaf_assignment.iter_mut() {
            *slot = phase.module_of[*slot];
        }
        if phase.module_count == level.len() {
            return (leaf_assignment, phase.codelength);
        }
        level = aggregate(&level, &phase.module_of, phase.module_count);
    }
}

/// Sweep nodes in seeded-random order, applying the best improving move per
/// node, until a full pass changes nothing.
fn local_move_phase(level: &Level, node_term: f64, rng: &mut ChaCha8Rng) -> PhaseResult {
    let n = level.len();
    let mut module_of: Vec<usize> = (0..n).collect();
    let mut flows: Vec<ModuleFlow> = (0..n)
        .map(|i| ModuleFlow {
            mass: level.mass[i],
            exit: level.adj[i].iter().map(|&(_, f)| f).sum(),
        })
        .collect();
    let mut q: f64 = flows.iter().map(|m| m.exit).sum();
    let mut order: Vec<usize> = (0..n).collect();
    let mut total_moved = 0;

    loop {
        order.shuffle(rng);
        let mut moved_this_pass = 0;

        for &i in &order {
            let old = module_of[i];
            let mut flow_to: BTreeMap<usize, f64> = BTreeMap::new();
            let mut s_i = 0.0;
            for &(j, f) in &level.adj[i] {
                s_i += f;
                *flow_to.entry(module_of[j]).or_insert(0.0) += f;
            }
            let k_old = flow_to.get(&old).copied().unwrap_or(0.0);
            let blocked: Vec<usize> = level.forbidden[i]
                .iter()
                .map(|&j| module_of[j])
                .collect();

            let mass_i = level.mass[i];
            let exit_old = flows[old].exit;
            let mass_old = flows[old].mass;
            let exit_old_after = exit_old + 2.0 * k_old - s_i;

            let mut best_delta = -MIN_IMPROVEMENT;
            let mut best: Option<(usize, f64)> = None;
            // BTreeMap iteration ascends module ids, so the first strict
            // improvement wins ties toward the lowest id.
            for (&m, &k_new) in &flow_to {
                if m == old || blocked.contains(&m) {
                    continue;
                }
                let exit_new = flows[m].exit;
                let mass_new = flows[m].mass;
                let exit_new_after = exit_new + s_i - 2.0 * k_new;
                let q_after = q + (exit_old_after - exit_old) + (exit_new_after - exit_new);

                let delta = plogp(q_after) - plogp(q)
                    - 2.0 * (plogp(exit_old_after) - plogp(exit_old) + plogp(exit_new_after)
                        - plogp(exit_new))
                    + plogp(exit_old_after + mass_old - mass_i)
                    - plogp(exit_old + mass_old)
                    + plogp(exit_new_after + mass_new + mass_i)
                    - plogp(exit_new + mass_new);

                if delta < best_delta {
                    best_delta = delta;
                    best = Some((m, exit_new_after));
                }
            }

            if let Some((m, exit_new_after)) = best {
                q += (exit_old_after - flows[old].exit) + (exit_new_after - flows[m].exit);
                flows[old].exit = exit_old_after;
                flows[old].mass -= mass_i;
                flows[m].exit = exit_new_after;
                flows[m].mass += mass_i;
                module_of[i] = m;
                moved_this_pass += 1;
            }
        }

        total_moved += moved_this_pass;
        if moved_this_pass == 0 {
            break;
        }
    }

    // Compact ids and recompute flows from scratch to wash out accumulated
    // floating-point drift.
    let mut remap = vec![usize::MAX; n];
    let mut module_count = 0;
    for &m in &module_of {
        if remap[m] == usize::MAX {
            remap[m] = module_count;
            module_count += 1;
        }
    }
    let module_of: Vec<usize> = module_of.into_iter().map(|m| remap[m]).collect();

    let mut fresh = vec![ModuleFlow::default(); module_count];
    for i in 0..n {
        fresh[module_of[i]].mass += level.mass[i];
        for &(j, f) in &level.adj[i] {
            if module_of[j] != module_of[i] {
                fresh[module_of[i]].exit += f;
            }
        }
    }

    PhaseResult {
        codelength: codelength_from_flows(&fresh, node_term),
        module_of,
        module_count,
        moved: total_moved,
    }
}

fn aggregate(level: &Level, module_of: &[usize], module_count: usize) -> Level {
    let mut mass = vec![0.0; module_count];
    for (i, &m) in module_of.iter().enumerate() {
        mass[m] += level.mass[i];
    }

    let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..level.len() {
        for &(j, f) in &level.adj[i] {
            if j <= i {
                continue;
            }
            let (mi, mj) = (module_of[i], module_of[j]);
            if mi != mj {
                *acc.entry((mi.min(mj), mi.max(mj))).or_insert(0.0) += f;
            }
        }
    }
    let mut adj = vec![Vec::new(); module_count];
    for ((a, b), f) in acc {
        adj[a].push((b, f));
        adj[b].push((a, f));
    }

    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..level.len() {
        for &j in &level.forbidden[i] {
            if j > i {
                let (mi, mj) = (module_of[i], module_of[j]);
                pairs.insert((mi.min(mj), mi.max(mj)));
            }
        }
    }
    let mut forbidden = vec![Vec::new(); module_count];
    for (a, b) in pairs {
        forbidden[a].push(b);
        forbidden[b].push(a);
    }

    Level {
        mass,
        adj,
        forbidden,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn network(edges: &[(&str, &str, f64)]) -> IngredientNetwork {
        let mut n = IngredientNetwork::new();
        for (a, b, w) in edges {
            n.set_edge(a, b, *w);
        }
        n
    }

    /// Two 4-cliques ("a*" and "b*") joined by a single unit edge.
    fn two_cliques() -> IngredientNetwork {
        let mut edges = Vec::new();
        let cliques = [["a0", "a1", "a2", "a3"], ["b0", "b1", "b2", "b3"]];
        for clique in &cliques {
            for i in 0..4 {
                for j in i + 1..4 {
                    edges.push((clique[i], clique[j], 1.0));
                }
            }
        }
        edges.push(("a0", "b0", 1.0));
        network(&edges)
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        list.iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    /// All set partitions of 0..n as restricted-growth strings.
    fn set_partitions(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut current = vec![0usize; n];
        fn recurse(current: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
            if pos == current.len() {
                out.push(current.clone());
                return;
            }
            for id in 0..=max_used + 1 {
                current[pos] = id;
                recurse(current, pos + 1, max_used.max(id), out);
            }
        }
        if n > 0 {
            recurse(&mut current, 1, 0, &mut out);
        } else {
            out.push(Vec::new());
        }
        out
    }

    /// Minimal codelength over every partition of the network.
    fn exhaustive_minimum(n: &IngredientNetwork) -> f64 {
        let nodes: Vec<String> = n.nodes().map(str::to_string).collect();
        let mut best = f64::INFINITY;
        for assignment in set_partitions(nodes.len()) {
            let map: BTreeMap<String, usize> = nodes
                .iter()
                .cloned()
                .zip(assignment.iter().copied())
                .collect();
            let p = Partition::new(super::super::relabel(map), 0.0).unwrap();
            let bits = codelength(n, &p).unwrap();
            best = best.min(bits);
        }
        best
    }

    #[test]
    fn two_cliques_split_into_their_cliques() {
        let n = two_cliques();
        let p = detect(&n, &ConstraintSet::empty(), 10, 42).unwrap();
        assert_eq!(p.community_count(), 2);
        for (x, y) in [("a0", "a3"), ("b1", "b2")] {
            assert!(p.same_community(x, y));
        }
        assert!(!p.same_community("a0", "b0"));
        assert!((p.codelength - exhaustive_minimum(&n)).abs() < 1e-9);
    }

    #[test]
    fn must_link_forces_co_assignment() {
        let n = two_cliques();
        let cs = ConstraintSet::new(pairs(&[("a1", "b2")]), []).unwrap();
        let p = detect(&n, &cs, 10, 42).unwrap();
        assert!(p.same_community("a1", "b2"));
    }

    #[test]
    fn cannot_link_forces_separation() {
        let n = two_cliques();
        let cs = ConstraintSet::new([], pairs(&[("a1", "a2")])).unwrap();
        let p = detect(&n, &cs, 10, 42).unwrap();
        assert!(!p.same_community("a1", "a2"));
        // The rest of the structure still holds together.
        assert!(!p.same_community("a0", "b0"));
    }

    #[test]
    fn zero_trials_is_an_error() {
        let n = two_cliques();
        assert!(matches!(
            detect(&n, &ConstraintSet::empty(), 0, 1),
            Err(Error::ZeroTrials)
        ));
    }

    #[test]
    fn empty_network_is_an_error() {
        let n = IngredientNetwork::new();
        assert!(matches!(
            detect(&n, &ConstraintSet::empty(), 1, 1),
            Err(Error::EmptyNetwork)
        ));
    }

    #[test]
    fn detection_is_deterministic() {
        let n = two_cliques();
        let cs = ConstraintSet::new(pairs(&[("a0", "a1")]), pairs(&[("b0", "b3")])).unwrap();
        let p1 = detect(&n, &cs, 5, 7).unwrap();
        let p2 = detect(&n, &cs, 5, 7).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn never_worse_than_singletons_or_merge() {
        let n = two_cliques();
        let nodes: Vec<String> = n.nodes().map(str::to_string).collect();
        let singleton = Partition::new(
            nodes.iter().cloned().zip(0..).collect(),
            0.0,
        )
        .unwrap();
        let merged = Partition::new(
            nodes.iter().cloned().map(|x| (x, 0)).collect(),
            0.0,
        )
        .unwrap();
        let p = detect(&n, &ConstraintSet::empty(), 5, 3).unwrap();
        assert!(p.codelength <= codelength(&n, &singleton).unwrap() + 1e-12);
        assert!(p.codelength <= codelength(&n, &merged).unwrap() + 1e-12);
    }

    #[test]
    fn isolated_nodes_get_their_own_communities() {
        let mut n = network(&[("a", "b", 2.0)]);
        n.add_node("x");
        n.add_node("y");
        let p = detect(&n, &ConstraintSet::empty(), 3, 9).unwrap();
        assert_ne!(p.community_of("x"), p.community_of("y"));
        assert_ne!(p.community_of("x"), p.community_of("a"));
        assert_eq!(p.len(), 4);
    }

    #[test]
    fn edgeless_network_is_all_singletons_with_zero_bits() {
        let mut n = IngredientNetwork::new();
        for id in ["a", "b", "c"] {
            n.add_node(id);
        }
        let p = detect(&n, &ConstraintSet::empty(), 2, 5).unwrap();
        assert_eq!(p.community_count(), 3);
        assert_eq!(p.codelength, 0.0);
    }

    #[test]
    fn path_singletons_reach_exhaustive_minimum() {
        let n = network(&[("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0)]);
        let p = detect(&n, &ConstraintSet::empty(), 10, 11).unwrap();
        assert!((p.codelength - exhaustive_minimum(&n)).abs() < 1e-9);
    }
}
