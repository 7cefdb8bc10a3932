//! Synthetic planted-cuisine generator for desk-scale verification.
//!
//! Ingredients are grouped into clusters with mostly cluster-local compound
//! pools; Western recipes draw from one cluster and Eastern recipes spread
//! across clusters, with a configurable noise rate injecting the opposite
//! behaviour. The planted cluster labels come back as ground truth.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::recipes::{Recipe, RecipeCorpus};
use crate::seed;

/// Parameters of the planted instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub clusters: usize,
    pub ingredients_per_cluster: usize,
    pub compounds_per_cluster: usize,
    /// Fraction of an ingredient's compounds drawn from foreign clusters.
    pub compound_overlap: f64,
    pub recipes_per_corpus: usize,
    /// Inclusive recipe size bounds.
    pub recipe_size_range: (usize, usize),
    /// Fraction of Western recipes given a cross-cluster ingredient, and of
    /// Eastern recipes collapsed into a single cluster.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            clusters: 4,
            ingredients_per_cluster: 15,
            compounds_per_cluster: 40,
            compound_overlap: 0.1,
            recipes_per_corpus: 200,
            recipe_size_range: (3, 8),
            noise: 0.05,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let complain = |message: String| Err(Error::InvalidSyntheticSpec { message });
        if self.clusters < 2 {
            return complain(format!("need at least 2 clusters, got {}", self.clusters));
        }
        if self.ingredients_per_cluster == 0 || self.compounds_per_cluster == 0 {
            return complain("cluster pools must be non-empty".to_string());
        }
        if self.recipes_per_corpus == 0 {
            return complain("need at least one recipe per corpus".to_string());
        }
        for (name, value) in [
            ("compound_overlap", self.compound_overlap),
            ("noise", self.noise),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    min: 0.0,
                    max: 1.0,
                });
            }
        }
        let (min_size, max_size) = self.recipe_size_range;
        if min_size < 2 || max_size < min_size {
            return complain(format!(
                "recipe size range {min_size}..={max_size} must satisfy 2 <= min <= max"
            ));
        }
        if max_size > self.ingredients_per_cluster {
            // Western recipes draw from a single cluster's pool.
            return Err(Error::RecipeTooLarge {
                requested: max_size,
                available: self.ingredients_per_cluster,
            });
        }
        Ok(())
    }

    pub fn ingredient_count(&self) -> usize {
        self.clusters * self.ingredients_per_cluster
    }

    fn ingredient_id(&self, cluster: usize, index: usize) -> String {
        format!("ing_c{cluster:02}_{index:03}")
    }

    fn compound_id(&self, cluster: usize, index: usize) -> String {
        format!("cmp_c{cluster:02}_{index:03}")
    }
}

/// A generated instance: bipartite data, both corpora and planted labels.
#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub bipartite: BipartiteGraph,
    pub western: RecipeCorpus,
    pub eastern: RecipeCorpus,
    /// Ingredient id -> planted cluster index.
    pub labels: BTreeMap<String, usize>,
}

/// Generate an instance, deterministically under `spec.seed`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticData> {
    spec.validate()?;

    let mut bipartite = BipartiteGraph::new();
    let mut labels = BTreeMap::new();

    // Each ingredient carries roughly a quarter of its cluster pool; the
    // overlap share of those draws comes from foreign pools.
    let per_ingredient = (spec.compounds_per_cluster).div_ceil(4).max(1);
    let foreign_draws = ((spec.compound_overlap * per_ingredient as f64).round() as usize)
        .min(per_ingredient);
    let own_draws = per_ingredient - foreign_draws;

    let mut rng = seed::rng_for(spec.seed, "synth-compounds", 0);
    for cluster in 0..spec.clusters {
        for index in 0..spec.ingredients_per_cluster {
            let ingredient = spec.ingredient_id(cluster, index);
            labels.insert(ingredient.clone(), cluster);
            bipartite.add_ingredient(&ingredient)?;

            for pick in sample(&mut rng, spec.compounds_per_cluster, own_draws) {
                bipartite.add_edge(&ingredient, &spec.compound_id(cluster, pick))?;
            }
            let foreign_pool = (spec.clusters - 1) * spec.compounds_per_cluster;
            for pick in sample(&mut rng, foreign_pool, foreign_draws) {
                let (mut c, i) = (
                    pick / spec.compounds_per_cluster,
                    pick % spec.compounds_per_cluster,
                );
                if c >= cluster {
                    c += 1; // skip the home cluster
                }
                bipartite.add_edge(&ingredient, &spec.compound_id(c, i))?;
            }
        }
    }

    let western = generate_corpus(spec, Cuisine::Western)?;
    let eastern = generate_corpus(spec, Cuisine::Eastern)?;

    Ok(SyntheticData {
        bipartite,
        western,
        eastern,
        labels,
    })
}

#[derive(Clone, Copy)]
enum Cuisine {
    Western,
    Eastern,
}

fn generate_corpus(spec: &SyntheticSpec, cuisine: Cuisine) -> Result<RecipeCorpus> {
    let (label, prefix, stream) = match cuisine {
        Cuisine::Western => ("western", 'w', "synth-west"),
        Cuisine::Eastern => ("eastern", 'e', "synth-east"),
    };
    let mut rng = seed::rng_for(spec.seed, stream, 0);
    let mut corpus = RecipeCorpus::new(label);
    let (min_size, max_size) = spec.recipe_size_range;

    for number in 0..spec.recipes_per_corpus {
        let size = rng.random_range(min_size..=max_size);
        let noisy = rng.random_bool(spec.noise);
        let ingredients = match (cuisine, noisy) {
            // A noisy Western recipe carries one foreign ingredient,
            // injecting cross-cluster pairs; a noisy Eastern recipe collapses
            // into a single cluster, injecting intra-cluster pairs.
            (Cuisine::Western, false) => single_cluster_recipe(spec, &mut rng, size, 0),
            (Cuisine::Western, true) => single_cluster_recipe(spec, &mut rng, size, 1),
            (Cuisine::Eastern, false) => spread_recipe(spec, &mut rng, size),
            (Cuisine::Eastern, true) => single_cluster_recipe(spec, &mut rng, size, 0),
        };
        corpus.push(Recipe::new(format!("{prefix}{number:04}"), ingredients))?;
    }
    Ok(corpus)
}

/// Recipe drawn from one home cluster, with `foreign` of its slots replaced
/// by uniformly chosen foreign-cluster ingredients.
fn single_cluster_recipe(
    spec: &SyntheticSpec,
    rng: &mut ChaCha8Rng,
    size: usize,
    foreign: usize,
) -> Vec<String> {
    let home = rng.random_range(0..spec.clusters);
    let local = size - foreign.min(size - 1);
    let mut out: Vec<String> = sample(&mut *rng, spec.ingredients_per_cluster, local)
        .into_iter()
        .map(|i| spec.ingredient_id(home, i))
        .collect();
    let foreign_pool = (spec.clusters - 1) * spec.ingredients_per_cluster;
    for pick in sample(&mut *rng, foreign_pool, size - local) {
        let (mut c, i) = (
            pick / spec.ingredients_per_cluster,
            pick % spec.ingredients_per_cluster,
        );
        if c >= home {
            c += 1;
        }
        out.push(spec.ingredient_id(c, i));
    }
    out
}

/// Recipe drawn one-ingredient-per-cluster across distinct clusters, so every
/// pair it contributes is a cross-cluster pair. The requested size is capped
/// at the cluster count; intra-cluster contamination of the Eastern corpus is
/// modelled only by the explicit noise rate.
fn spread_recipe(spec: &SyntheticSpec, rng: &mut ChaCha8Rng, size: usize) -> Vec<String> {
    let mut cluster_order: Vec<usize> = (0..spec.clusters).collect();
    use rand::seq::SliceRandom;
    cluster_order.shuffle(rng);

    cluster_order
        .into_iter()
        .take(size.min(spec.clusters).max(2))
        .map(|cluster| {
            let pick = rng.random_range(0..spec.ingredients_per_cluster);
            spec.ingredient_id(cluster, pick)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SyntheticSpec {
        SyntheticSpec {
            clusters: 2,
            ingredients_per_cluster: 10,
            compounds_per_cluster: 20,
            compound_overlap: 0.0,
            recipes_per_corpus: 30,
            recipe_size_range: (3, 5),
            noise: 0.0,
            seed: 11,
        }
    }

    #[test]
    fn zero_overlap_projects_block_diagonal() {
        let data = generate_synthetic(&small_spec()).unwrap();
        let network = data.bipartite.project();
        for (a, b, _) in network.edges() {
            assert_eq!(
                data.labels[a], data.labels[b],
                "cross-cluster edge {a}-{b} under zero overlap"
            );
        }
    }

    #[test]
    fn ingredient_counts_and_labels_are_balanced() {
        let data = generate_synthetic(&small_spec()).unwrap();
        assert_eq!(data.labels.len(), 20);
        let in_first = data.labels.values().filter(|&&c| c == 0).count();
        assert_eq!(in_first, 10);
        assert_eq!(data.bipartite.ingredient_count(), 20);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_synthetic(&small_spec()).unwrap();
        let b = generate_synthetic(&small_spec()).unwrap();
        assert_eq!(a.bipartite, b.bipartite);
        assert_eq!(a.western, b.western);
        assert_eq!(a.eastern, b.eastern);
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn western_recipes_stay_in_one_cluster_without_noise() {
        let data = generate_synthetic(&small_spec()).unwrap();
        for recipe in data.western.iter() {
            let clusters: std::collections::BTreeSet<usize> = recipe
                .ingredients
                .iter()
                .map(|i| data.labels[i])
                .collect();
            assert_eq!(clusters.len(), 1, "recipe {} spans clusters", recipe.id);
        }
    }

    #[test]
    fn eastern_recipes_span_clusters_without_noise() {
        let data = generate_synthetic(&small_spec()).unwrap();
        for recipe in data.eastern.iter() {
            let clusters: std::collections::BTreeSet<usize> = recipe
                .ingredients
                .iter()
                .map(|i| data.labels[i])
                .collect();
            assert!(clusters.len() >= 2, "recipe {} is single-cluster", recipe.id);
        }
    }

    #[test]
    fn oversized_recipes_are_rejected() {
        let spec = SyntheticSpec {
            recipe_size_range: (3, 11),
            ingredients_per_cluster: 10,
            ..small_spec()
        };
        assert!(matches!(
            generate_synthetic(&spec),
            Err(Error::RecipeTooLarge { .. })
        ));
    }

    #[test]
    fn invalid_fractions_are_rejected() {
        let spec = SyntheticSpec {
            noise: 1.4,
            ..small_spec()
        };
        assert!(matches!(
            generate_synthetic(&spec),
            Err(Error::OutOfRange { .. })
        ));
    }
}
