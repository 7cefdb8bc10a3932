//! Reconciliation of the two cuisines' training graphs: per-node discrepancy
//! values and the edge-removal loop that eliminates pairs claimed by both.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recipes::CooccurrenceGraph;

/// Discrepancy of one node against its Western component.
///
/// `d_p` sums the node's Western edges inside the component, `d_n` its
/// Eastern edges into the same component. A node with no Eastern edge into
/// the component has no discrepancy and therefore no report.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub node: String,
    pub d_p: f64,
    pub d_n: f64,
    /// max{d_p/d_n, d_n/d_p}; infinite when d_p = 0.
    pub value: f64,
}

/// Which edge sets one sanity-check decision removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SanityAction {
    DropBoth,
    DropEastern,
    DropWestern,
}

/// One removal decision, in execution order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SanityDecision {
    pub iteration: usize,
    pub component_smallest_node: String,
    pub node: String,
    pub d_p: f64,
    pub d_n: f64,
    pub value: f64,
    pub action: SanityAction,
}

/// Compute the discrepancy report for `node` against a connected component of
/// the Western graph, or `None` when the node has no Eastern edge into it.
pub fn node_discrepancy(
    node: &str,
    component: &BTreeSet<String>,
    western: &CooccurrenceGraph,
    eastern: &CooccurrenceGraph,
) -> Result<Option<DiscrepancyReport>> {
    if !component.contains(node) {
        return Err(Error::NodeOutsideComponent {
            node: node.to_string(),
        });
    }
    let sum_into = |graph: &CooccurrenceGraph| -> f64 {
        graph
            .neighbors(node)
            .filter(|(other, _)| component.contains(*other))
            .map(|(_, w)| w)
            .sum()
    };
    let d_n = sum_into(eastern);
    if d_n == 0.0 {
        return Ok(None);
    }
    let d_p = sum_into(western);
    let value = if d_p == 0.0 {
        f64::INFINITY
    } else {
        (d_p / d_n).max(d_n / d_p)
    };
    Ok(Some(DiscrepancyReport {
        node: node.to_string(),
        d_p,
        d_n,
        value,
    }))
}

/// Ratio below which both edge sets are discarded: pairs genuinely backed by
/// one cuisine are expected to dominate the other by at least this factor.
pub const DISCARD_THRESHOLD: f64 = 3.0;

/// Remove contradictory pairs until no Western component contains a node with
/// Eastern edges into it.
///
/// Each outer iteration recomputes the Western components and, per component,
/// resolves the node with the maximal discrepancy value (ties: larger
/// d_p + d_n, then smaller node id). Removals only delete edges; nodes stay,
/// possibly isolated. Returns the cleaned graphs and the ordered decision log.
pub fn sanity_check(
    western: &CooccurrenceGraph,
    eastern: &CooccurrenceGraph,
) -> (CooccurrenceGraph, CooccurrenceGraph, Vec<SanityDecision>) {
    let mut western = western.clone();
    let mut eastern = eastern.clone();
    let mut log = Vec::new();

    let mut iteration = 0;
    loop {
        iteration += 1;
        let mut removed_any = false;

        for component in western.connected_components() {
            let Some(report) = maximal_discrepancy(&component, &western, &eastern) else {
                continue;
            };
            let node = &report.node;

            // D_p: western edges from the node into its component;
            // D_n: eastern edges from the node into the same component.
            let action = if report.value < DISCARD_THRESHOLD {
                SanityAction::DropBoth
            } else if report.d_p > report.d_n {
                SanityAction::DropEastern
            } else if report.d_p == 0.0 {
                // An isolated-in-western node cannot support a western
                // pairing claim; dropping the (empty) D_p would not progress.
                SanityAction::DropEastern
            } else {
                SanityAction::DropWestern
            };

            if matches!(action, SanityAction::DropBoth | SanityAction::DropWestern) {
                remove_edges_into(&mut western, node, &component);
            }
            if matches!(action, SanityAction::DropBoth | SanityAction::DropEastern) {
                remove_edges_into(&mut eastern, node, &component);
            }
            removed_any = true;

            log.push(SanityDecision {
                iteration,
                component_smallest_node: component
                    .iter()
                    .next()
                    .expect("components are non-empty")
                    .clone(),
                node: node.clone(),
                d_p: report.d_p,
                d_n: report.d_n,
                value: report.value,
                action,
            });
        }

        if !removed_any {
            break;
        }
    }

    (western, eastern, log)
}

fn maximal_discrepancy(
    component: &BTreeSet<String>,
    western: &CooccurrenceGraph,
    eastern: &CooccurrenceGraph,
) -> Option<DiscrepancyReport> {
    let mut best: Option<DiscrepancyReport> = None;
    for node in component {
        let Some(report) = node_discrepancy(node, component, western, eastern)
            .expect("node comes from the component")
        else {
            continue;
        };

        let better = match &best {
            None => true,
            Some(current) => {
                let by_value = report.value.partial_cmp(&current.value).unwrap();
                let by_evidence = (report.d_p + report.d_n)
                    .partial_cmp(&(current.d_p + current.d_n))
                    .unwrap();
                by_value
                    .then(by_evidence)
                    .then(current.node.cmp(&report.node))
                    .is_gt()
            }
        };
        if better {
            best = Some(report);
        }
    }
    best
}

fn remove_edges_into(graph: &mut CooccurrenceGraph, node: &str, component: &BTreeSet<String>) {
    let targets: Vec<String> = graph
        .neighbors(node)
        .filter(|(other, _)| component.contains(*other))
        .map(|(other, _)| other.to_string())
        .collect();
    for target in targets {
        graph.remove_edge(node, &target);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::IngredientNetwork;

    fn graph(edges: &[(&str, &str, f64)]) -> CooccurrenceGraph {
        let mut g = IngredientNetwork::new();
        for (a, b, w) in edges {
            g.set_edge(a, b, *w);
        }
        g
    }

    fn component(nodes: &[&str]) -> BTreeSet<String> {
        nodes.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn discrepancy_sums_both_edge_sets() {
        let western = graph(&[("a", "b", 3.0), ("b", "c", 2.0)]);
        let eastern = graph(&[("b", "c", 1.0)]);
        let report = node_discrepancy("b", &component(&["a", "b", "c"]), &western, &eastern)
            .unwrap()
            .unwrap();
        assert_eq!(report.d_p, 5.0);
        assert_eq!(report.d_n, 1.0);
        assert_eq!(report.value, 5.0);
    }

    #[test]
    fn node_without_eastern_edges_has_no_report() {
        let western = graph(&[("a", "b", 3.0), ("b", "c", 2.0)]);
        let eastern = graph(&[("b", "c", 1.0)]);
        let report =
            node_discrepancy("a", &component(&["a", "b", "c"]), &western, &eastern).unwrap();
        assert!(report.is_none());
    }

    #[test]
    fn two_node_discrepancy() {
        let western = graph(&[("a", "b", 2.0)]);
        let eastern = graph(&[("a", "b", 1.0)]);
        let report = node_discrepancy("a", &component(&["a", "b"]), &western, &eastern)
            .unwrap()
            .unwrap();
        assert_eq!((report.d_p, report.d_n, report.value), (2.0, 1.0, 2.0));
    }

    #[test]
    fn node_outside_component_is_an_error() {
        let western = graph(&[("a", "b", 2.0)]);
        let eastern = graph(&[("a", "b", 1.0)]);
        assert!(matches!(
            node_discrepancy("z", &component(&["a", "b"]), &western, &eastern),
            Err(Error::NodeOutsideComponent { .. })
        ));
    }

    #[test]
    fn dominant_western_evidence_drops_eastern_edges() {
        let western = graph(&[("a", "b", 3.0), ("b", "c", 2.0)]);
        let eastern = graph(&[("b", "c", 1.0)]);
        let (w2, e2, log) = sanity_check(&western, &eastern);
        assert_eq!(w2, western);
        assert_eq!(e2.edge_count(), 0);
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].action, SanityAction::DropEastern);
        assert_eq!(log[0].node, "b");
        assert_eq!(log[0].value, 5.0);
    }

    #[test]
    fn low_ratio_drops_both_sides() {
        let western = graph(&[("a", "b", 2.0)]);
        let eastern = graph(&[("a", "b", 1.0)]);
        let (w2, e2, log) = sanity_check(&western, &eastern);
        assert_eq!(w2.edge_count(), 0);
        assert_eq!(e2.edge_count(), 0);
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].action, SanityAction::DropBoth);
        // Nodes survive as isolates.
        assert!(w2.contains_node("a") && w2.contains_node("b"));
    }

    #[test]
    fn disjoint_graphs_pass_through() {
        let western = graph(&[("a", "b", 2.0)]);
        let eastern = graph(&[("c", "d", 1.0)]);
        let (w2, e2, log) = sanity_check(&western, &eastern);
        assert_eq!(w2, western);
        assert_eq!(e2, eastern);
        assert!(log.is_empty());
    }

    #[test]
    fn eastern_dominance_drops_western_edges() {
        let western = graph(&[("a", "b", 1.0)]);
        let eastern = graph(&[("a", "b", 5.0)]);
        let (w2, e2, log) = sanity_check(&western, &eastern);
        assert_eq!(log[0].action, SanityAction::DropWestern);
        assert_eq!(w2.edge_count(), 0);
        assert_eq!(e2, eastern);
    }

    #[test]
    fn output_graphs_share_no_pair() {
        let western = graph(&[
            ("a", "b", 4.0),
            ("b", "c", 2.0),
            ("c", "d", 6.0),
            ("e", "f", 1.0),
        ]);
        let eastern = graph(&[
            ("a", "b", 1.0),
            ("c", "d", 2.0),
            ("e", "f", 3.0),
            ("x", "y", 9.0),
        ]);
        let (w2, e2, _) = sanity_check(&western, &eastern);
        for (a, b, _) in w2.edges() {
            assert!(e2.weight(a, b).is_none(), "pair {a}-{b} survived in both");
        }
        // No remaining discrepancies.
        for comp in w2.connected_components() {
            for node in &comp {
                assert!(node_discrepancy(node, &comp, &w2, &e2).unwrap().is_none());
            }
        }
    }

    #[test]
    fn removals_never_touch_weights() {
        let western = graph(&[("a", "b", 4.0), ("b", "c", 2.0)]);
        let eastern = graph(&[("a", "c", 1.0), ("b", "c", 7.0)]);
        let (w2, e2, _) = sanity_check(&western, &eastern);
        for (a, b, w) in w2.edges() {
            assert_eq!(western.weight(a, b), Some(w));
        }
        for (a, b, w) in e2.edges() {
            assert_eq!(eastern.weight(a, b), Some(w));
        }
    }
}
