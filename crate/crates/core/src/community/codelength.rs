//! Two-level map equation over an undirected weighted network.
//!
//! With total edge weight W, node visit rates are p_a = strength(a)/2W and a
//! module's exit rate is the weight of its boundary edges over 2W. The
//! codelength of a partition M is
//!
//!   L(M) = q H(Q) + sum_i p_i^circ H(P_i)
//!
//! with q = sum_i q_i, H(Q) the entropy of {q_i/q}, p_i^circ = q_i + sum of
//! member visit rates, and H(P_i) the entropy of the module's exit rate and
//! member rates normalized by p_i^circ. Everything is evaluated here in the
//! algebraically expanded plogp form; all logarithms are base 2.

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::IngredientNetwork;

/// x log2 x, with the conventional value 0 at x = 0 (and for any
/// non-positive x, which only arises from floating-point round-off).
#[inline]
pub(crate) fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// Per-module flow terms of a partition: visit-rate mass and exit rate.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ModuleFlow {
    pub mass: f64,
    pub exit: f64,
}

/// Expanded two-level map equation:
/// L = plogp(q) - 2 sum_i plogp(q_i) + sum_i plogp(q_i + mass_i) - node_term,
/// where node_term = sum_a plogp(p_a) is supplied by the caller because it is
/// constant under module moves.
pub(crate) fn codelength_from_flows(modules: &[ModuleFlow], node_term: f64) -> f64 {
    let q: f64 = modules.iter().map(|m| m.exit).sum();
    let mut value = plogp(q) - node_term;
    for module in modules {
        value -= 2.0 * plogp(module.exit);
        value += plogp(module.exit + module.mass);
    }
    value
}

/// Bits per random-walk step needed to describe the walk under `partition`.
///
/// Errors if the network has no edges or the partition does not cover exactly
/// the network's nodes.
pub fn codelength(network: &IngredientNetwork, partition: &Partition) -> Result<f64> {
    if network.edge_count() == 0 {
        return Err(Error::EdgelessNetwork);
    }
    for node in network.nodes() {
        if partition.community_of(node).is_none() {
            return Err(Error::PartitionMismatch {
                message: format!("network node `{node}` has no community"),
            });
        }
    }
    if partition.len() != network.node_count() {
        let extra = partition
            .assignment()
            .keys()
            .find(|n| !network.contains_node(n))
            .expect("length mismatch implies an extra node");
        return Err(Error::PartitionMismatch {
            message: format!("partition covers `{extra}` which is not a network node"),
        });
    }

    let two_w = 2.0 * network.total_weight();
    let mut modules = vec![ModuleFlow::default(); partition.community_count()];
    let mut node_term = 0.0;

    for node in network.nodes() {
        let rate = network.strength(node) / two_w;
        node_term += plogp(rate);
        modules[partition.community_of(node).unwrap()].mass += rate;
    }
    for (a, b, w) in network.edges() {
        let ma = partition.community_of(a).unwrap();
        let mb = partition.community_of(b).unwrap();
        if ma != mb {
            let flow = w / two_w;
            modules[ma].exit += flow;
            modules[mb].exit += flow;
        }
    }

    Ok(codelength_from_flows(&modules, node_term))
}
