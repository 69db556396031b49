//! Reassignment of undersized clusters by Mahalanobis depth.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::partition::Partition;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

struct ClusterModel {
    label: usize,
    mean: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
}

fn cluster_model(cloud: &PointCloud, indices: &[usize], label: usize) -> Result<ClusterModel> {
    let m = cloud.dim();
    let s = indices.len();
    let mut mean = DVector::zeros(m);
    for &i in indices {
        for (d, &c) in cloud.point(i).iter().enumerate() {
            mean[d] += c;
        }
    }
    mean /= s as f64;

    let mut cov = DMatrix::zeros(m, m);
    for &i in indices {
        let centered = DVector::from_iterator(m, cloud.point(i).iter().copied()) - &mean;
        cov += &centered * centered.transpose();
    }
    cov /= (s - 1) as f64;

    // Ridge added only when the covariance is singular, escalating until the
    // factorization succeeds.
    let trace = cov.trace();
    let base = if trace > 0.0 {
        1e-9 * trace / m as f64
    } else {
        1e-9
    };
    let mut ridge = 0.0;
    for _ in 0..4 {
        let mut attempt = cov.clone();
        for d in 0..m {
            attempt[(d, d)] += ridge;
        }
        if let Some(chol) = Cholesky::new(attempt) {
            return Ok(ClusterModel { label, mean, chol });
        }
        ridge = if ridge == 0.0 { base } else { ridge * 1000.0 };
    }
    Err(Error::param(
        "cluster covariance",
        format!("cluster {label} has no usable covariance factorization"),
    ))
}

impl ClusterModel {
    /// Depth of `x` in this cluster: `1 / (1 + squared Mahalanobis
    /// distance)`. Always in `(0, 1]`, 1 exactly at the mean.
    fn depth(&self, x: &[f64]) -> f64 {
        let diff = DVector::from_iterator(x.len(), x.iter().copied()) - &self.mean;
        let solved = self.chol.solve(&diff);
        1.0 / (1.0 + diff.dot(&solved))
    }
}

/// Dissolves clusters smaller than `min_size` and reassigns each of their
/// points to the surviving cluster where the point is deepest (ties go to the
/// lower label). Surviving clusters keep their membership; statistics are
/// computed once, before any reassignment. Labels are renumbered by first
/// occurrence afterwards. With `min_size <= 1` the partition is returned
/// unchanged; when no cluster reaches `min_size` an error is returned.
pub fn reassign_small_clusters(
    partition: &Partition,
    cloud: &PointCloud,
    min_size: usize,
) -> Result<Partition> {
    if cloud.len() != partition.len() {
        return Err(Error::PartitionSizeMismatch {
            got: partition.len(),
            expected: cloud.len(),
        });
    }
    if min_size <= 1 {
        return Ok(partition.clone());
    }
    let sizes = partition.cluster_sizes();
    let survivors: Vec<usize> = (0..partition.cluster_count())
        .filter(|&c| sizes[c] >= min_size)
        .collect();
    if survivors.is_empty() {
        return Err(Error::NoSurvivingCluster { min_size });
    }
    if survivors.len() == partition.cluster_count() {
        return Ok(partition.clone());
    }

    let clusters = partition.clusters();
    let models: Vec<ClusterModel> = survivors
        .iter()
        .map(|&c| cluster_model(cloud, &clusters[c], c))
        .collect::<Result<_>>()?;

    let mut raw = partition.labels().to_vec();
    for (i, raw_label) in raw.iter_mut().enumerate() {
        if sizes[*raw_label] >= min_size {
            continue;
        }
        let point = cloud.point(i);
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for model in &models {
            let d = model.depth(point);
            if d > best.0 {
                best = (d, model.label);
            }
        }
        *raw_label = best.1;
    }
    Partition::canonicalize(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud_two_blobs_and_stray() -> (PointCloud, Partition) {
        // Cluster 0: tight blob near the origin. Cluster 1: blob near
        // (10, 0). Cluster 2: one stray point at (2, 0), nearer blob 0.
        let cloud = PointCloud::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![10.0, 0.0],
            vec![11.0, 0.0],
            vec![10.0, 1.0],
            vec![11.0, 1.0],
            vec![2.0, 0.0],
        ])
        .unwrap();
        let partition = Partition::from_labels(vec![0, 0, 0, 0, 1, 1, 1, 1, 2]).unwrap();
        (cloud, partition)
    }

    #[test]
    fn stray_point_joins_the_nearer_blob() {
        let (cloud, partition) = cloud_two_blobs_and_stray();
        let out = reassign_small_clusters(&partition, &cloud, 2).unwrap();
        assert_eq!(out.cluster_count(), 2);
        assert_eq!(out.label(8), out.label(0));
        // Surviving memberships are untouched.
        for i in 0..4 {
            assert_eq!(out.label(i), 0);
        }
        for i in 4..8 {
            assert_eq!(out.label(i), 1);
        }
    }

    #[test]
    fn min_size_one_changes_nothing() {
        let (cloud, partition) = cloud_two_blobs_and_stray();
        let out = reassign_small_clusters(&partition, &cloud, 1).unwrap();
        assert_eq!(out.labels(), partition.labels());
    }

    #[test]
    fn errors_when_no_cluster_survives() {
        let (cloud, partition) = cloud_two_blobs_and_stray();
        assert!(matches!(
            reassign_small_clusters(&partition, &cloud, 100),
            Err(Error::NoSurvivingCluster { min_size: 100 })
        ));
    }

    #[test]
    fn degenerate_covariance_still_assigns() {
        // Both survivors are collinear point sets; the ridge makes their
        // covariances usable and the stray still lands with the nearer one.
        let cloud = PointCloud::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![2.0, 0.0],
            vec![20.0, 5.0],
            vec![21.0, 5.0],
            vec![22.0, 5.0],
            vec![3.0, 0.0],
        ])
        .unwrap();
        let partition = Partition::from_labels(vec![0, 0, 0, 1, 1, 1, 2]).unwrap();
        let out = reassign_small_clusters(&partition, &cloud, 3).unwrap();
        assert_eq!(out.cluster_count(), 2);
        assert_eq!(out.label(6), out.label(0));
    }

    #[test]
    fn depth_ties_prefer_the_lower_label() {
        // Two mirror-image clusters; the stray sits exactly between them.
        let cloud = PointCloud::new(vec![
            vec![-2.0, 0.0],
            vec![-1.0, 0.5],
            vec![-1.0, -0.5],
            vec![2.0, 0.0],
            vec![1.0, 0.5],
            vec![1.0, -0.5],
            vec![0.0, 0.0],
        ])
        .unwrap();
        let partition = Partition::from_labels(vec![0, 0, 0, 1, 1, 1, 2]).unwrap();
        let out = reassign_small_clusters(&partition, &cloud, 3).unwrap();
        assert_eq!(out.label(6), 0);
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let (cloud, _) = cloud_two_blobs_and_stray();
        let partition = Partition::from_labels(vec![0, 1]).unwrap();
        assert!(reassign_small_clusters(&partition, &cloud, 2).is_err());
    }
}
