//! Graph data structures: the ingredient–compound bipartite graph, its
//! weighted one-mode projection, local filtration and degree statistics.

mod bipartite;
mod network;

pub use bipartite::{load_bipartite, BipartiteGraph};
pub use network::{density, mean_degree, DegreeHistogram, IngredientNetwork};
