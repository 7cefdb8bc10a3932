//! Error type shared by all pipeline stages.

use thiserror::Error;

/// Errors produced by graph construction, corpus handling, detection and the
/// pipeline driver.
#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An identifier was used as both an ingredient and a compound.
    #[error("identifier `{id}` appears as both ingredient and compound")]
    MixedRole { id: String },

    /// A recipe id occurred more than once within one corpus.
    #[error("duplicate recipe id `{id}`")]
    DuplicateRecipeId { id: String },

    /// A numeric argument fell outside its documented range.
    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// A corpus is too small for the requested 80/10/10 split.
    #[error("corpus `{label}` has {size} recipes; splitting requires at least 10")]
    CorpusTooSmall { label: String, size: usize },

    /// A corpus that must be non-empty was empty.
    #[error("corpus `{label}` is empty")]
    EmptyCorpus { label: String },

    /// Discrepancy was requested for a node outside the given component.
    #[error("node `{node}` is not a member of the given component")]
    NodeOutsideComponent { node: String },

    /// A partition does not cover exactly the nodes of the network.
    #[error("partition/network mismatch: {message}")]
    PartitionMismatch { message: String },

    /// Community ids are not a contiguous range starting at 0.
    #[error("community ids skip {found} (ids must cover 0..{expected})")]
    NonContiguousCommunities { found: usize, expected: usize },

    /// The codelength is undefined on an edgeless network.
    #[error("codelength requires a network with at least one edge")]
    EdgelessNetwork,

    /// Community detection was asked to run zero trials.
    #[error("detection requires at least one trial")]
    ZeroTrials,

    /// Community detection was asked to partition an empty network.
    #[error("cannot detect communities in an empty network")]
    EmptyNetwork,

    /// A must-link group contains a cannot-link pair.
    #[error("conflicting constraints: must-link closure joins cannot-link pair `{a}`/`{b}`")]
    ConflictingConstraints { a: String, b: String },

    /// A constraint pair degenerated to a single node.
    #[error("constraint pair `{id}`/`{id}` links a node to itself")]
    SelfConstraint { id: String },

    /// No recipe in the corpus had two or more partitioned ingredients.
    #[error("no scorable recipe: every recipe has fewer than 2 ingredients in the partition")]
    UndefinedScore,

    /// A pairing of an ingredient with itself was requested.
    #[error("`{id}` cannot be paired with itself")]
    SelfPair { id: String },

    /// The synthetic generator was asked for recipes larger than its pools.
    #[error("recipe size {requested} exceeds the {available} ingredients available")]
    RecipeTooLarge { requested: usize, available: usize },

    /// A synthetic generator parameter was invalid.
    #[error("invalid synthetic spec: {message}")]
    InvalidSyntheticSpec { message: String },

    /// Underlying file I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
