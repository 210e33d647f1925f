//! Divisive clustering of predicates into a topic hierarchy.

pub mod hierarchy;
pub mod kmeans;
pub mod silhouette;

pub use hierarchy::{
    build_hierarchy, default_k_max, optimal_k, OptimalSplit, TopicHierarchy, TopicId, TopicNode,
    DEFAULT_ALPHA, MIN_SPLIT_MEMBERS,
};
pub use kmeans::{kmeans_assign, member_features, ClusterAssignment, RESTARTS};
pub use silhouette::{
    dissimilarity, neighborhood_sw, silhouette, silhouette_width, PredicateSilhouette,
    SilhouetteReport,
};
