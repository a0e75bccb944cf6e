//! Network statistics, motif counting and closed-form moments.

mod counts;
mod moments;
mod motif;
mod paths;
mod statistic;
mod variance;

pub use counts::{
    count_by_enumeration, rooted_count_by_enumeration, rooted_subgraph_count, rooted_triangle_count,
    subgraph_count, triangle_count, triangles_per_node, vshape_count, MAX_COUNT_NODES,
};
pub use moments::{
    expected_rooted_triangles, expected_subgraph_count, expected_triangles, expected_vshapes,
    MAX_EXPECTATION_NODES,
};
pub use motif::{Motif, MAX_MOTIF_NODES};
pub use paths::{
    average_path_length, betweenness, betweenness_all, bfs_distances, closeness, connected_components,
    diameter, largest_component,
};
pub use statistic::{analytic_mu, degree_assortativity, evaluate_all, local_clustering, transitivity, StatisticSpec};
pub use variance::{
    plugin_variance_exponents, triangle_count_variance, variance_order, OverlapTerm, VarianceOrder,
};
