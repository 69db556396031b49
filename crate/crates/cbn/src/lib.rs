//! Topology-aware clustering for point clouds.
//!
//! The core algorithm builds a k-nearest-neighbor neighborhood around every
//! point, tracks how many connected components and independent cycles each
//! neighborhood contains as an edge-length threshold sweeps a fixed grid,
//! and keeps a neighbor only when its component and cycle profiles stay
//! close to the center's. Strongly connected components of the surviving
//! directed graph become the clusters, so points are grouped by the local
//! shape of the data around them rather than by raw distance alone.
//!
//! The crate also ships:
//!
//! - classical baselines (k-means, agglomerative linkage, density-based
//!   clustering) over the same distance matrices, in [`baselines`];
//! - pair-counting agreement scores between two clusterings, in [`eval`];
//! - a reproducible two-dimensional shape benchmark generator, in [`synth`];
//! - an ingestion pipeline turning station observation logs into
//!   standardized monthly feature vectors, in [`ingest`].
//!
//! # Example
//!
//! ```
//! use cbn::{run_cbn, CbnConfig, DistanceSpec, PointCloud};
//!
//! let mut points = Vec::new();
//! for i in 0..4 {
//!     for j in 0..4 {
//!         let (x, y) = (i as f64, j as f64);
//!         points.push(vec![x, y]);
//!         points.push(vec![x + 40.0, y]);
//!     }
//! }
//! let cloud = PointCloud::new(points)?;
//! let output = run_cbn(&cloud, &DistanceSpec::Euclidean, &CbnConfig::new(8))?;
//! assert_eq!(output.partition.cluster_count(), 2);
//! # Ok::<(), cbn::Error>(())
//! ```
//!
//! Heavy stages run on a rayon thread pool when the default `parallel`
//! feature is enabled and sequentially otherwise; results are identical
//! either way.

pub mod baselines;
pub mod cloud;
pub mod depth;
pub mod distance;
pub mod ecdf;
pub mod error;
pub mod eval;
pub mod graph;
pub mod homology;
pub mod ingest;
pub mod knn;
mod par;
pub mod partition;
pub mod pipeline;
pub mod refine;
mod stats;
pub mod synth;
mod union_find;

pub use cloud::PointCloud;
pub use distance::{build_distance_matrix, DistanceMatrix, DistanceSpec};
pub use error::{Error, Result};
pub use eval::{jaccard_index, pair_counts, rand_index, PairCounts};
pub use graph::{ComponentMode, NeighborhoodGraph};
pub use homology::{BettiProfile, ThresholdGrid};
pub use partition::Partition;
pub use pipeline::{run_cbn, CbnConfig, CbnOutput};
pub use refine::{Tau, TuningParams};
