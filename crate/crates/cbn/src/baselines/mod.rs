//! Conventional clusterers used as comparison baselines.

mod dbscan;
mod hierarchical;
mod kmeans;

pub use dbscan::{dbscan, noise_as_singletons, DbscanLabel};
pub use hierarchical::{
    dendrogram, hierarchical, Cut, Dendrogram, HierarchicalResult, Linkage, Merge,
};
pub use kmeans::{kmeans, KMeansConfig, KMeansResult};
