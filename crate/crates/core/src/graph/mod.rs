//! Graphs, edge-probability matrices, sampling and deterministic RNG streams.

mod adjacency;
mod edgelist;
mod prob;
mod rng;

pub use adjacency::AdjacencyMatrix;
pub(crate) use adjacency::BitRows;
pub use edgelist::{
    read_edge_list, read_edge_list_file, write_edge_list, write_labeled_edge_list, NodeLabels,
};
pub use prob::{sample_network, EdgeProbMatrix};
pub use rng::{level, SeedSpec, StreamRng};
