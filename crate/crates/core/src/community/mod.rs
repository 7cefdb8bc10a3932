//! Constraint-aware two-level map-equation community detection.

mod codelength;
mod constraints;
mod optimizer;

pub use codelength::codelength;
pub use constraints::{apply_constraints, ConstrainedContext, ConstraintSet};
pub use optimizer::detect;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Disjoint community assignment with its two-level map-equation codelength.
///
/// Community ids are dense integers from 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: BTreeMap<String, usize>,
    community_count: usize,
    pub codelength: f64,
}

impl Partition {
    /// Build from an assignment map, validating that community ids form a
    /// contiguous range starting at 0.
    pub fn new(assignment: BTreeMap<String, usize>, codelength: f64) -> Result<Self> {
        let count = assignment.values().max().map_or(0, |m| m + 1);
        let mut used = vec![false; count];
        for &id in assignment.values() {
            used[id] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::NonContiguousCommunities {
                found: missing,
                expected: count,
            });
        }
        Ok(Self {
            assignment,
            community_count: count,
            codelength,
        })
    }

    pub fn community_of(&self, node: &str) -> Option<usize> {
        self.assignment.get(node).copied()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &BTreeMap<String, usize> {
        &self.assignment
    }

    /// Nodes per community, indexed by community id.
    pub fn groups(&self) -> Vec<Vec<&str>> {
        let mut groups = vec![Vec::new(); self.community_count];
        for (node, &id) in &self.assignment {
            groups[id].push(node.as_str());
        }
        groups
    }

    pub fn same_community(&self, a: &str, b: &str) -> bool {
        match (self.community_of(a), self.community_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }
}

/// Renumber arbitrary community labels into dense ids, assigned in order of
/// first appearance over lexicographically sorted node ids.
pub(crate) fn relabel(raw: BTreeMap<String, usize>) -> BTreeMap<String, usize> {
    let mut mapping: BTreeMap<usize, usize> = BTreeMap::new();
    let mut next = 0;
    raw.into_iter()
        .map(|(node, old)| {
            let id = *mapping.entry(old).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            (node, id)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contiguity_is_enforced() {
        let map = BTreeMap::from([("a".to_string(), 0), ("b".to_string(), 2)]);
        assert!(matches!(
            Partition::new(map, 0.0),
            Err(Error::NonContiguousCommunities {
                found: 1,
                expected: 3
            })
        ));
    }

    #[test]
    fn relabel_follows_lexicographic_first_appearance() {
        let raw = BTreeMap::from([
            ("apple".to_string(), 7),
            ("banana".to_string(), 3),
            ("cherry".to_string(), 7),
        ]);
        let out = relabel(raw);
        assert_eq!(out["apple"], 0);
        assert_eq!(out["banana"], 1);
        assert_eq!(out["cherry"], 0);
    }
}
