//! Recipe corpora: ingestion, matching against the ingredient network,
//! balancing, 80/10/10 splitting and co-occurrence graph construction.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::IngredientNetwork;
use crate::seed;

/// Ingredient graph weighted by the number of recipes a pair appears in.
pub type CooccurrenceGraph = IngredientNetwork;

/// One recipe: an id and its deduplicated ingredient set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub id: String,
    pub ingredients: BTreeSet<String>,
}

impl Recipe {
    pub fn new(id: impl Into<String>, ingredients: impl IntoIterator<Item = String>) -> Self {
        Self {
            id: id.into(),
            ingredients: ingredients.into_iter().collect(),
        }
    }

    /// Number of unordered ingredient pairs this recipe contributes.
    pub fn pair_count(&self) -> usize {
        let k = self.ingredients.len();
        k * (k.saturating_sub(1)) / 2
    }
}

/// Ordered list of recipes under one cuisine tag. Recipe ids are unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeCorpus {
    pub label: String,
    recipes: Vec<Recipe>,
}

impl RecipeCorpus {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            recipes: Vec::new(),
        }
    }

    pub fn from_recipes(
        label: impl Into<String>,
        recipes: impl IntoIterator<Item = Recipe>,
    ) -> Result<Self> {
        let mut corpus = Self::new(label);
        for recipe in recipes {
            corpus.push(recipe)?;
        }
        Ok(corpus)
    }

    /// Append a recipe, rejecting duplicate ids.
    pub fn push(&mut self, recipe: Recipe) -> Result<()> {
        if self.recipes.iter().any(|r| r.id == recipe.id) {
            return Err(Error::DuplicateRecipeId { id: recipe.id });
        }
        self.recipes.push(recipe);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.recipes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recipes.is_empty()
    }

    pub fn recipes(&self) -> &[Recipe] {
        &self.recipes
    }

    pub fn iter(&self) -> impl Iterator<Item = &Recipe> {
        self.recipes.iter()
    }
}

/// What `load_recipes` skipped, reported alongside the corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    /// Records dropped for having an empty ingredient list.
    pub skipped_empty: usize,
}

#[derive(Deserialize)]
struct RecipeRecord {
    id: String,
    ingredients: Vec<String>,
}

/// Parse a recipe file body. JSON Lines is the primary format (one
/// `{"id": ..., "ingredients": [...]}` object per line); the
/// `id,ingredient1;ingredient2;...` CSV form is accepted as a fallback.
/// Blank lines and lines starting with `#` are skipped.
pub fn load_recipes(label: &str, text: &str) -> Result<(RecipeCorpus, LoadReport)> {
    let mut corpus = RecipeCorpus::new(label);
    let mut report = LoadReport::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let record = if line.trim_start().starts_with('{') {
            serde_json::from_str::<RecipeRecord>(line).map_err(|e| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?
        } else {
            parse_csv_record(line, idx + 1)?
        };
        if record.ingredients.is_empty() {
            report.skipped_empty += 1;
            continue;
        }
        corpus.push(Recipe::new(record.id, record.ingredients))?;
    }
    Ok((corpus, report))
}

fn parse_csv_record(line: &str, line_no: usize) -> Result<RecipeRecord> {
    let (id, rest) = line.split_once(',').ok_or_else(|| Error::Parse {
        line: line_no,
        message: format!("expected `id,ingredient1;ingredient2;...`, got `{line}`"),
    })?;
    if id.is_empty() {
        return Err(Error::Parse {
            line: line_no,
            message: "empty recipe id".to_string(),
        });
    }
    let ingredients = rest
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    Ok(RecipeRecord {
        id: id.to_string(),
        ingredients,
    })
}

/// Result of intersecting a corpus with the network's node set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MatchReport {
    pub input_recipes: usize,
    pub kept_recipes: usize,
    /// Ingredient mentions dropped because the network does not know them.
    pub unknown_ingredient_mentions: usize,
}

/// Intersect every recipe with the network's nodes. Recipes left with fewer
/// than two ingredients are dropped — a single ingredient yields no pairs.
pub fn match_to_network(
    corpus: &RecipeCorpus,
    network: &IngredientNetwork,
) -> (RecipeCorpus, MatchReport) {
    let mut matched = RecipeCorpus::new(corpus.label.clone());
    let mut report = MatchReport {
        input_recipes: corpus.len(),
        ..MatchReport::default()
    };
    for recipe in corpus.iter() {
        let kept: BTreeSet<String> = recipe
            .ingredients
            .iter()
            .filter(|i| network.contains_node(i))
            .cloned()
            .collect();
        report.unknown_ingredient_mentions += recipe.ingredients.len() - kept.len();
        if kept.len() >= 2 {
            report.kept_recipes += 1;
            matched
                .push(Recipe {
                    id: recipe.id.clone(),
                    ingredients: kept,
                })
                .expect("ids unique in source corpus");
        }
    }
    (matched, report)
}

/// Downsample the larger corpus uniformly at random (without replacement) to
/// the size of the smaller one. Relative recipe order is preserved.
pub fn balance_corpora(
    a: &RecipeCorpus,
    b: &RecipeCorpus,
    seed_value: u64,
) -> Result<(RecipeCorpus, RecipeCorpus)> {
    for corpus in [a, b] {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus {
                label: corpus.label.clone(),
            });
        }
    }
    let target = a.len().min(b.len());
    let downsample = |corpus: &RecipeCorpus, stream: &str| -> RecipeCorpus {
        if corpus.len() == target {
            return corpus.clone();
        }
        let mut rng = seed::rng_for(seed_value, stream, 0);
        let mut picked = rand::seq::index::sample(&mut rng, corpus.len(), target).into_vec();
        picked.sort_unstable();
        RecipeCorpus {
            label: corpus.label.clone(),
            recipes: picked
                .into_iter()
                .map(|i| corpus.recipes()[i].clone())
                .collect(),
        }
    };
    Ok((downsample(a, "balance-a"), downsample(b, "balance-b")))
}

/// Disjoint train/validation/test parts of one corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSplit {
    pub train: RecipeCorpus,
    pub validation: RecipeCorpus,
    pub test: RecipeCorpus,
    pub seed: u64,
}

/// Seeded 80/10/10 split: train = floor(0.8 N), validation = floor(0.1 N),
/// test takes the remainder.
pub fn split_corpus(corpus: &RecipeCorpus, seed_value: u64) -> Result<CorpusSplit> {
    let n = corpus.len();
    if n < 10 {
        return Err(Error::CorpusTooSmall {
            label: corpus.label.clone(),
            size: n,
        });
    }
    let train_size = n * 8 / 10;
    let validation_size = n / 10;

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng_for(seed_value, "split", 0));

    let part = |indices: &[usize]| RecipeCorpus {
        label: corpus.label.clone(),
        recipes: indices.iter().map(|&i| corpus.recipes()[i].clone()).collect(),
    };
    Ok(CorpusSplit {
        train: part(&order[..train_size]),
        validation: part(&order[train_size..train_size + validation_size]),
        test: part(&order[train_size + validation_size..]),
        seed: seed_value,
    })
}

/// Count, for every unordered ingredient pair, the recipes containing both.
/// Every ingredient mentioned in the corpus becomes a node.
pub fn build_cooccurrence(corpus: &RecipeCorpus) -> CooccurrenceGraph {
    let mut graph = CooccurrenceGraph::new();
    for recipe in corpus.iter() {
        let ingredients: Vec<&String> = recipe.ingredients.iter().collect();
        for ing in &ingredients {
            graph.add_node(ing);
        }
        for (idx, a) in ingredients.iter().enumerate() {
            for b in &ingredients[idx + 1..] {
                graph.bump_edge(a, b, 1.0);
            }
        }
    }
    graph
}
