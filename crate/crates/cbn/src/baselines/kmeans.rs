//! Lloyd's k-means with distance-weighted seeding.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::partition::Partition;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// k-means settings. Every random choice flows from `seed`, so equal inputs
/// and settings give byte-identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KMeansConfig {
    /// Number of clusters, `1 <= k <= n`.
    pub k: usize,
    /// Seed for center initialization.
    pub seed: u64,
    /// Cap on Lloyd iterations; the loop also stops at a fixpoint.
    pub max_iter: usize,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        KMeansConfig {
            k,
            seed,
            max_iter: 100,
        }
    }
}

/// A finished k-means run.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub partition: Partition,
    /// Sum of squared distances from each point to its center.
    pub objective: f64,
    /// Objective after each Lloyd iteration; nonincreasing.
    pub objective_trace: Vec<f64>,
    /// Lloyd iterations actually run.
    pub iterations: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Distance-weighted seeding: the first center is drawn uniformly, each
/// subsequent one with probability proportional to the squared distance from
/// the centers chosen so far.
fn seed_centers(cloud: &PointCloud, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = cloud.len();
    let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    centers.push(cloud.point(first).to_vec());

    let mut d2: Vec<f64> = (0..n)
        .map(|i| sq_dist(cloud.point(i), cloud.point(first)))
        .collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut u = rng.random_range(0.0..total);
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if u < w {
                    pick = i;
                    break;
                }
                u -= w;
            }
            pick
        } else {
            // All remaining mass is zero (duplicate-heavy data): take the
            // lowest-index point not already chosen.
            (0..n).find(|&i| !chosen[i]).unwrap_or(0)
        };
        chosen[next] = true;
        centers.push(cloud.point(next).to_vec());
        for (i, slot) in d2.iter_mut().enumerate() {
            let d = sq_dist(cloud.point(i), cloud.point(next));
            if d < *slot {
                *slot = d;
            }
        }
    }
    centers
}

fn nearest_center(point: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let d = sq_dist(point, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Runs seeded k-means to a fixpoint (or the iteration cap) and returns the
/// partition with its objective history. Empty clusters are repaired by
/// reseeding from the point farthest from its center.
pub fn kmeans(cloud: &PointCloud, cfg: &KMeansConfig) -> Result<KMeansResult> {
    let n = cloud.len();
    if cfg.k < 1 || cfg.k > n {
        return Err(Error::InvalidClusterCount { count: cfg.k, n });
    }
    if cfg.max_iter == 0 {
        return Err(Error::param("max_iter", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut centers = seed_centers(cloud, cfg.k, &mut rng);
    let mut assignment = vec![usize::MAX; n];
    let mut trace = Vec::new();
    let mut iterations = 0;

    for _ in 0..cfg.max_iter {
        iterations += 1;
        // Assign.
        let mut changed = false;
        let mut objective = 0.0;
        for (i, slot) in assignment.iter_mut().enumerate() {
            let (c, d) = nearest_center(cloud.point(i), &centers);
            if *slot != c {
                *slot = c;
                changed = true;
            }
            objective += d;
        }
        // Repair empty clusters from the farthest points.
        let mut counts = vec![0usize; cfg.k];
        for &a in &assignment {
            counts[a] += 1;
        }
        for c in 0..cfg.k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| counts[assignment[i]] > 1)
                .max_by(|&a, &b| {
                    let da = sq_dist(cloud.point(a), &centers[assignment[a]]);
                    let db = sq_dist(cloud.point(b), &centers[assignment[b]]);
                    // Ties to the lower index.
                    da.partial_cmp(&db).unwrap().then(b.cmp(&a))
                })
                .expect("a nonempty cluster with at least two points exists");
            counts[assignment[far]] -= 1;
            assignment[far] = c;
            counts[c] = 1;
            changed = true;
        }
        trace.push(objective);
        if !changed {
            break;
        }
        // Update.
        let dim = cloud.dim();
        let mut sums = vec![vec![0.0; dim]; cfg.k];
        for i in 0..n {
            for (d, &coord) in cloud.point(i).iter().enumerate() {
                sums[assignment[i]][d] += coord;
            }
        }
        for (row, &count) in sums.iter_mut().zip(&counts) {
            for v in row {
                *v /= count as f64;
            }
        }
        centers = sums;
    }

    let objective = *trace.last().unwrap();
    Ok(KMeansResult {
        partition: Partition::canonicalize(&assignment)?,
        objective,
        objective_trace: trace,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blob_cloud() -> PointCloud {
        let mut pts = Vec::new();
        for &(cx, cy) in &[(0.0, 0.0), (50.0, 0.0), (0.0, 50.0)] {
            for i in 0..10 {
                let a = i as f64 * 0.628;
                pts.push(vec![cx + a.cos(), cy + a.sin()]);
            }
        }
        PointCloud::new(pts).unwrap()
    }

    #[test]
    fn recovers_well_separated_blobs() {
        let result = kmeans(&blob_cloud(), &KMeansConfig::new(3, 7)).unwrap();
        assert_eq!(result.partition.cluster_count(), 3);
        for blob in 0..3 {
            let first = result.partition.label(blob * 10);
            for i in 0..10 {
                assert_eq!(result.partition.label(blob * 10 + i), first);
            }
        }
    }

    #[test]
    fn objective_is_nonincreasing() {
        let result = kmeans(&blob_cloud(), &KMeansConfig::new(5, 3)).unwrap();
        for w in result.objective_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
        assert_eq!(result.iterations, result.objective_trace.len());
    }

    #[test]
    fn same_seed_same_result_different_seed_may_differ() {
        let cloud = blob_cloud();
        let a = kmeans(&cloud, &KMeansConfig::new(3, 42)).unwrap();
        let b = kmeans(&cloud, &KMeansConfig::new(3, 42)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn k_equal_n_puts_every_point_alone() {
        let cloud = PointCloud::new(vec![vec![0.0], vec![5.0], vec![9.0]]).unwrap();
        let result = kmeans(&cloud, &KMeansConfig::new(3, 0)).unwrap();
        assert_eq!(result.partition.cluster_count(), 3);
        assert!(result.objective.abs() < 1e-12);
    }

    #[test]
    fn k_equal_one_groups_everything() {
        let result = kmeans(&blob_cloud(), &KMeansConfig::new(1, 0)).unwrap();
        assert_eq!(result.partition.cluster_count(), 1);
    }

    #[test]
    fn invalid_k_is_rejected() {
        let cloud = blob_cloud();
        assert!(kmeans(&cloud, &KMeansConfig::new(0, 0)).is_err());
        assert!(kmeans(&cloud, &KMeansConfig::new(31, 0)).is_err());
    }

    #[test]
    fn duplicate_points_do_not_break_seeding() {
        let cloud = PointCloud::new(vec![vec![1.0]; 6]).unwrap();
        let result = kmeans(&cloud, &KMeansConfig::new(3, 11)).unwrap();
        assert_eq!(result.partition.len(), 6);
        assert!(result.objective.abs() < 1e-12);
    }
}
