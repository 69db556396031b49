//! The end-to-end clustering pipeline.

use crate::cloud::PointCloud;
use crate::depth::reassign_small_clusters;
use crate::distance::{build_distance_matrix, DistanceSpec};
use crate::ecdf::{fit_ecdf, transform_distances};
use crate::error::{Error, Result};
use crate::graph::{extract_clusters, NeighborhoodGraph};
use crate::homology::{betti_profiles, BettiProfile, ThresholdGrid};
use crate::knn::knn_neighborhoods;
use crate::partition::Partition;
use crate::refine::{default_taus, refine_neighborhoods, Tau, TuningParams};

/// Full configuration of a clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct CbnConfig {
    /// Neighborhood size, at least 2. The one parameter with no universal
    /// default: pick it against the expected smallest-cluster scale.
    pub k: usize,
    /// Tolerances, component mode, and optional small-cluster handling.
    pub params: TuningParams,
    /// Thresholds at which Betti numbers are sampled.
    pub grid: ThresholdGrid,
    /// Worker threads for the parallel stages; 0 uses the global default.
    /// Ignored when the crate is built without the `parallel` feature.
    pub threads: usize,
}

impl CbnConfig {
    /// Configuration with default tolerances, strong components, the
    /// 100-step grid, and no small-cluster reassignment.
    pub fn new(k: usize) -> Self {
        CbnConfig {
            k,
            params: TuningParams::default(),
            grid: ThresholdGrid::default_grid(),
            threads: 0,
        }
    }
}

/// Everything a clustering run produces beyond the partition itself.
#[derive(Debug, Clone, PartialEq)]
pub struct CbnOutput {
    /// The clustering.
    pub partition: Partition,
    /// Betti profile of each point's neighborhood, in point order.
    pub profiles: Vec<BettiProfile>,
    /// The refined directed neighborhood graph the clusters were read from.
    pub graph: NeighborhoodGraph,
    /// Tolerance on `beta0` change actually used (resolved when auto).
    pub tau0: f64,
    /// Tolerance on `beta1` change actually used (resolved when auto).
    pub tau1: f64,
}

fn run_stages(cloud: &PointCloud, spec: &DistanceSpec, cfg: &CbnConfig) -> Result<CbnOutput> {
    let matrix = build_distance_matrix(cloud, spec)?;
    let neighborhoods = knn_neighborhoods(&matrix, cfg.k)?;
    let ecdf = fit_ecdf(&neighborhoods)?;
    let transformed = transform_distances(&matrix, &ecdf);
    let profiles = betti_profiles(&neighborhoods, &transformed, &cfg.grid);

    let (tau0, tau1) = match (cfg.params.tau0, cfg.params.tau1) {
        (Tau::Fixed(t0), Tau::Fixed(t1)) => (t0, t1),
        (tau0, tau1) => {
            let (auto0, auto1) = default_taus(&neighborhoods, &profiles)?;
            (
                match tau0 {
                    Tau::Fixed(t) => t,
                    Tau::Auto => auto0,
                },
                match tau1 {
                    Tau::Fixed(t) => t,
                    Tau::Auto => auto1,
                },
            )
        }
    };

    let graph = refine_neighborhoods(&neighborhoods, &profiles, tau0, tau1)?;
    let mut partition = extract_clusters(&graph, cfg.params.mode);
    if let Some(min_size) = cfg.params.min_cluster_size {
        partition = reassign_small_clusters(&partition, cloud, min_size)?;
    }
    Ok(CbnOutput {
        partition,
        profiles,
        graph,
        tau0,
        tau1,
    })
}

/// Clusters a point cloud end to end: pairwise distances, k-nearest
/// neighborhoods, CDF rescaling, per-neighborhood Betti sequences,
/// similarity refinement, component extraction, and (optionally)
/// small-cluster reassignment.
///
/// The result is deterministic for a given input and configuration,
/// independent of thread count.
pub fn run_cbn(cloud: &PointCloud, spec: &DistanceSpec, cfg: &CbnConfig) -> Result<CbnOutput> {
    if cfg.k < 2 {
        return Err(Error::KBelowTwo(cfg.k));
    }

    #[cfg(feature = "parallel")]
    {
        if cfg.threads > 0 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads)
                .build()
                .map_err(|e| Error::ThreadPool(e.to_string()))?;
            return pool.install(|| run_stages(cloud, spec, cfg));
        }
    }
    run_stages(cloud, spec, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ComponentMode;

    /// Two well-separated squares of four points each.
    fn two_squares() -> PointCloud {
        let mut pts = Vec::new();
        for &(cx, cy) in &[(0.0, 0.0), (100.0, 0.0)] {
            for &(dx, dy) in &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
                pts.push(vec![cx + dx, cy + dy]);
            }
        }
        PointCloud::new(pts).unwrap()
    }

    #[test]
    fn separates_two_squares() {
        let cloud = two_squares();
        let out = run_cbn(&cloud, &DistanceSpec::Euclidean, &CbnConfig::new(4)).unwrap();
        assert_eq!(out.partition.cluster_count(), 2);
        assert_eq!(out.partition.labels(), &[0, 0, 0, 0, 1, 1, 1, 1]);
        assert!(out.tau0 >= 0.0 && out.tau1 >= 0.0);
        assert_eq!(out.profiles.len(), 8);
    }

    #[test]
    fn rejects_k_below_two() {
        let cloud = two_squares();
        assert!(matches!(
            run_cbn(&cloud, &DistanceSpec::Euclidean, &CbnConfig::new(1)),
            Err(Error::KBelowTwo(1))
        ));
    }

    #[test]
    fn fixed_taus_skip_auto_derivation() {
        let cloud = two_squares();
        let mut cfg = CbnConfig::new(4);
        cfg.params.tau0 = Tau::Fixed(0.3);
        cfg.params.tau1 = Tau::Fixed(0.7);
        let out = run_cbn(&cloud, &DistanceSpec::Euclidean, &cfg).unwrap();
        assert_eq!(out.tau0, 0.3);
        assert_eq!(out.tau1, 0.7);
    }

    #[test]
    fn weak_mode_merges_one_way_attachments() {
        let cloud = two_squares();
        let mut strong_cfg = CbnConfig::new(4);
        strong_cfg.params.mode = ComponentMode::Strong;
        let mut weak_cfg = strong_cfg.clone();
        weak_cfg.params.mode = ComponentMode::Weak;
        let strong = run_cbn(&cloud, &DistanceSpec::Euclidean, &strong_cfg).unwrap();
        let weak = run_cbn(&cloud, &DistanceSpec::Euclidean, &weak_cfg).unwrap();
        assert!(strong.partition.is_refinement_of(&weak.partition));
    }

    #[test]
    fn explicit_thread_count_matches_default() {
        let cloud = two_squares();
        let base = run_cbn(&cloud, &DistanceSpec::Euclidean, &CbnConfig::new(4)).unwrap();
        for threads in [1usize, 3] {
            let mut cfg = CbnConfig::new(4);
            cfg.threads = threads;
            let out = run_cbn(&cloud, &DistanceSpec::Euclidean, &cfg).unwrap();
            assert_eq!(out.partition, base.partition);
            assert_eq!(out.profiles, base.profiles);
            assert_eq!(out.tau0.to_bits(), base.tau0.to_bits());
            assert_eq!(out.tau1.to_bits(), base.tau1.to_bits());
        }
    }

    #[test]
    fn min_cluster_size_dissolves_stragglers() {
        // Two squares plus one stray point midway-but-nearer the first.
        let mut pts = two_squares().points().to_vec();
        pts.push(vec![20.0, 0.5]);
        let cloud = PointCloud::new(pts).unwrap();
        let mut cfg = CbnConfig::new(4);
        cfg.params.min_cluster_size = Some(2);
        let out = run_cbn(&cloud, &DistanceSpec::Euclidean, &cfg).unwrap();
        assert_eq!(out.partition.cluster_count(), 2);
        assert_eq!(out.partition.label(8), out.partition.label(0));
    }
}
