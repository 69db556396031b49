//! Deterministic density-based clustering.

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::union_find::UnionFind;

/// Per-point outcome of a density clustering run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbscanLabel {
    /// Member of the given cluster.
    Cluster(usize),
    /// Reachable from no core point.
    Noise,
}

/// Density-based clustering over a distance matrix.
///
/// A point is a core point when at least `min_pts` points (itself included)
/// lie within `eps` (inclusive). Clusters are the connected components of
/// core points at radius `eps`; non-core points join the lowest-labeled
/// cluster that has a core point within reach, or become noise.
///
/// Unlike seed-order formulations, the outcome here does not depend on any
/// visiting order: border points reachable from several clusters always take
/// the lowest label.
pub fn dbscan(matrix: &DistanceMatrix, eps: f64, min_pts: usize) -> Result<Vec<DbscanLabel>> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::param(
            "eps",
            format!("must be a finite nonnegative value, got {eps}"),
        ));
    }
    if min_pts < 1 {
        return Err(Error::param("min_pts", "must be at least 1"));
    }
    let n = matrix.n();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let row = matrix.row(i);
            (0..n).filter(|&j| row[j] <= eps).collect()
        })
        .collect();
    let core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= min_pts).collect();

    // Connect cores that reach each other.
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        if !core[i] {
            continue;
        }
        for &j in &neighbors[i] {
            if core[j] {
                uf.union(i as u32, j as u32);
            }
        }
    }

    // Number core clusters by first occurrence of a core point.
    let mut cluster_of_root: Vec<Option<usize>> = vec![None; n];
    let mut next = 0usize;
    let mut labels = vec![DbscanLabel::Noise; n];
    for i in 0..n {
        if !core[i] {
            continue;
        }
        let root = uf.find(i as u32) as usize;
        let c = *cluster_of_root[root].get_or_insert_with(|| {
            let c = next;
            next += 1;
            c
        });
        labels[i] = DbscanLabel::Cluster(c);
    }

    // Borders: lowest-labeled cluster with a core point in reach.
    for i in 0..n {
        if core[i] {
            continue;
        }
        let mut best: Option<usize> = None;
        for &j in &neighbors[i] {
            if core[j] {
                if let DbscanLabel::Cluster(c) = labels[j] {
                    best = Some(best.map_or(c, |b: usize| b.min(c)));
                }
            }
        }
        if let Some(c) = best {
            labels[i] = DbscanLabel::Cluster(c);
        }
    }
    Ok(labels)
}

/// Converts density labels into a partition for pair-counting evaluation,
/// giving every noise point its own singleton cluster.
pub fn noise_as_singletons(labels: &[DbscanLabel]) -> Result<Partition> {
    let cluster_count = labels
        .iter()
        .filter_map(|l| match l {
            DbscanLabel::Cluster(c) => Some(c + 1),
            DbscanLabel::Noise => None,
        })
        .max()
        .unwrap_or(0);
    let mut next_singleton = cluster_count;
    let raw: Vec<usize> = labels
        .iter()
        .map(|l| match l {
            DbscanLabel::Cluster(c) => *c,
            DbscanLabel::Noise => {
                let s = next_singleton;
                next_singleton += 1;
                s
            }
        })
        .collect();
    Partition::canonicalize(&raw)
}
