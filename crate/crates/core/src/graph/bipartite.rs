//! Ingredient–compound bipartite graph and its one-mode projection.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::network::IngredientNetwork;

/// Bipartite graph linking ingredients to the flavour compounds they contain.
///
/// The two identifier sets are disjoint and edges are deduplicated on insert.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BipartiteGraph {
    compounds: BTreeSet<String>,
    // ingredient -> compounds it contains; every ingredient has an entry
    containment: BTreeMap<String, BTreeSet<String>>,
    edge_count: usize,
}

impl BipartiteGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register an ingredient without any compounds.
    pub fn add_ingredient(&mut self, ingredient: &str) -> Result<()> {
        if self.compounds.contains(ingredient) {
            return Err(Error::MixedRole {
                id: ingredient.to_string(),
            });
        }
        self.containment.entry(ingredient.to_string()).or_default();
        Ok(())
    }

    /// Insert a containment edge. Duplicate edges are ignored; an identifier
    /// showing up on both sides is an integrity error.
    pub fn add_edge(&mut self, ingredient: &str, compound: &str) -> Result<()> {
        if self.compounds.contains(ingredient) {
            return Err(Error::MixedRole {
                id: ingredient.to_string(),
            });
        }
        if self.containment.contains_key(compound) {
            return Err(Error::MixedRole {
                id: compound.to_string(),
            });
        }
        self.compounds.insert(compound.to_string());
        let inserted = self
            .containment
            .entry(ingredient.to_string())
            .or_default()
            .insert(compound.to_string());
        if inserted {
            self.edge_count += 1;
        }
        Ok(())
    }

    pub fn ingredient_count(&self) -> usize {
        self.containment.len()
    }

    pub fn compound_count(&self) -> usize {
        self.compounds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn ingredients(&self) -> impl Iterator<Item = &str> {
        self.containment.keys().map(String::as_str)
    }

    pub fn compounds_of(&self, ingredient: &str) -> Option<&BTreeSet<String>> {
        self.containment.get(ingredient)
    }

    /// Iterate all containment edges in (ingredient, compound) lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.containment
            .iter()
            .flat_map(|(i, cs)| cs.iter().map(move |c| (i.as_str(), c.as_str())))
    }

    /// Project into ingredient space: edge weight is the number of shared
    /// compounds between two ingredients. Every ingredient becomes a node,
    /// including those sharing nothing.
    pub fn project(&self) -> IngredientNetwork {
        let mut network = IngredientNetwork::new();
        for ingredient in self.containment.keys() {
            network.add_node(ingredient);
        }

        // Accumulate pair counts compound-by-compound instead of intersecting
        // every ingredient pair.
        let mut holders: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (ingredient, compounds) in &self.containment {
            for compound in compounds {
                holders
                    .entry(compound.as_str())
                    .or_default()
                    .push(ingredient.as_str());
            }
        }

        let mut shared: BTreeMap<(&str, &str), u64> = BTreeMap::new();
        for ingredients in holders.values() {
            for (idx, a) in ingredients.iter().enumerate() {
                for b in &ingredients[idx + 1..] {
                    *shared.entry((a, b)).or_insert(0) += 1;
                }
            }
        }

        for ((a, b), count) in shared {
            network.set_edge(a, b, count as f64);
        }
        network
    }
}

/// Parse a tab-separated `ingredient<TAB>compound` edge list. Lines starting
/// with `#` and blank lines are skipped.
pub fn load_bipartite(text: &str) -> Result<BipartiteGraph> {
    let mut graph = BipartiteGraph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let ingredient = fields.next().unwrap_or("");
        let compound = fields.next().unwrap_or("");
        if ingredient.is_empty() || compound.is_empty() || fields.next().is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `ingredient<TAB>compound`, got `{line}`"),
            });
        }
        graph.add_edge(ingredient, compound)?;
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_from(rows: &[(&str, &str)]) -> Result<BipartiteGraph> {
        let mut g = BipartiteGraph::new();
        for (i, c) in rows {
            g.add_edge(i, c)?;
        }
        Ok(g)
    }

    /// Brute-force projection: intersect compound sets for every ingredient pair.
    pub(crate) fn project_by_intersection(g: &BipartiteGraph) -> IngredientNetwork {
        let mut network = IngredientNetwork::new();
        let ingredients: Vec<&str> = g.ingredients().collect();
        for ing in &ingredients {
            network.add_node(ing);
        }
        for (idx, a) in ingredients.iter().enumerate() {
            for b in &ingredients[idx + 1..] {
                let shared = g
                    .compounds_of(a)
                    .unwrap()
                    .intersection(g.compounds_of(b).unwrap())
                    .count();
                if shared > 0 {
                    network.set_edge(a, b, shared as f64);
                }
            }
        }
        network
    }

    #[test]
    fn builds_from_rows() {
        let g = graph_from(&[("A", "x"), ("A", "y"), ("B", "y")]).unwrap();
        assert_eq!(g.ingredient_count(), 2);
        assert_eq!(g.compound_count(), 2);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = graph_from(&[("A", "x"), ("A", "x")]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn mixed_role_is_rejected() {
        let err = graph_from(&[("A", "x"), ("x", "A")]).unwrap_err();
        assert!(matches!(err, Error::MixedRole { .. }));
    }

    #[test]
    fn load_reports_line_numbers() {
        let err = load_bipartite("# header\nA\tx\nbroken line\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn load_skips_header_and_dedupes() {
        let g = load_bipartite("# ingredient\tcompound\nA\tx\nA\ty\nB\ty\nA\tx\n").unwrap();
        assert_eq!(g.ingredient_count(), 2);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn projection_counts_shared_compounds() {
        let g = graph_from(&[("A", "x"), ("A", "y"), ("B", "y"), ("B", "z"), ("C", "z")]).unwrap();
        let n = g.project();
        assert_eq!(n.weight("A", "B"), Some(1.0));
        assert_eq!(n.weight("B", "C"), Some(1.0));
        assert_eq!(n.weight("A", "C"), None);
        assert_eq!(n.node_count(), 3);
    }

    #[test]
    fn projection_keeps_isolated_ingredients() {
        let g = graph_from(&[("A", "x"), ("B", "y")]).unwrap();
        let n = g.project();
        assert_eq!(n.edge_count(), 0);
        assert_eq!(n.node_count(), 2);
    }

    #[test]
    fn identical_compound_sets_share_all() {
        let g = graph_from(&[
            ("A", "x"),
            ("A", "y"),
            ("A", "z"),
            ("B", "x"),
            ("B", "y"),
            ("B", "z"),
        ])
        .unwrap();
        assert_eq!(g.project().weight("A", "B"), Some(3.0));
    }

    #[test]
    fn projection_matches_intersection_oracle() {
        let g = graph_from(&[
            ("A", "x"),
            ("A", "y"),
            ("B", "y"),
            ("B", "z"),
            ("C", "z"),
            ("C", "x"),
            ("C", "y"),
            ("D", "w"),
        ])
        .unwrap();
        assert_eq!(g.project(), project_by_intersection(&g));
    }
}
