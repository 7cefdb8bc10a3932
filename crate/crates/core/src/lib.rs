//! Flavour-network analysis: bipartite projection, local filtration,
//! cuisine reconciliation, constraint-aware map-equation community detection
//! and the evaluation pipeline that ranks ingredient pairings.

pub mod community;
pub mod error;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod recipes;
pub mod reconcile;
pub mod seed;
pub mod synth;

pub use community::{
    apply_constraints, codelength, detect, ConstrainedContext, ConstraintSet, Partition,
};
pub use error::{Error, Result};
pub use graph::{load_bipartite, BipartiteGraph, DegreeHistogram, IngredientNetwork};
pub use pipeline::{
    classify_pair, evaluate, prepare, rank_pairs, sample_knowledge, sensitivity, specificity,
    sweep, train, EvalTarget, ModelReport, PairVerdict, PipelineConfig, PreparedCorpora,
    RepetitionScore, ScoreReport, SweepParams, TrainedModel,
};
pub use recipes::{
    balance_corpora, build_cooccurrence, load_recipes, match_to_network, split_corpus,
    CooccurrenceGraph, CorpusSplit, LoadReport, MatchReport, Recipe, RecipeCorpus,
};
pub use reconcile::{
    node_discrepancy, sanity_check, DiscrepancyReport, SanityAction, SanityDecision,
};
pub use synth::{generate_synthetic, SyntheticData, SyntheticSpec};
