//! Prints everything worth knowing about the stock benchmark: geometry
//! sanity, tolerance derivation, clustering quality, ablation, and baseline
//! comparisons. Used to validate the layout.

use cbn::baselines::{hierarchical, kmeans, Cut, KMeansConfig, Linkage};
use cbn::distance::{build_distance_matrix, DistanceSpec};
use cbn::ecdf::{fit_ecdf, transform_distances};
use cbn::eval::{jaccard_index, pair_counts, rand_index};
use cbn::graph::{extract_clusters, knn_digraph, ComponentMode};
use cbn::homology::betti_profiles;
use cbn::knn::knn_neighborhoods;
use cbn::pipeline::{run_cbn, CbnConfig};
use cbn::refine::{default_tau, pooled_relative_changes};
use cbn::synth::{benchmark13, BENCHMARK13_SEED};
use cbn::{Partition, ThresholdGrid};
use std::time::Instant;

fn five_num(values: &mut [f64]) -> String {
    values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| {
        let pos = (values.len() - 1) as f64 * p;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        values[lo] + (values[hi] - values[lo]) * (pos - pos.floor())
    };
    format!(
        "min {:.4}  q1 {:.4}  med {:.4}  q3 {:.4}  max {:.4}",
        values[0],
        q(0.25),
        q(0.5),
        q(0.75),
        values[values.len() - 1]
    )
}

fn scores(candidate: &Partition, truth: &Partition) -> (f64, f64) {
    let counts = pair_counts(truth, candidate).unwrap();
    (rand_index(&counts), jaccard_index(&counts))
}

fn sizes_desc(p: &Partition) -> Vec<usize> {
    let mut s = p.cluster_sizes();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

fn main() {
    let k = 12;
    let data = benchmark13(BENCHMARK13_SEED, 0);
    let n = data.cloud.len();
    println!("== dataset ==");
    println!("points {n}, shapes {}", data.shapes.len());
    println!("per-shape counts {:?}", data.truth.cluster_sizes());

    println!("\n== geometry ==");
    let matrix = build_distance_matrix(&data.cloud, &DistanceSpec::Euclidean).unwrap();
    let labels = data.truth.labels();
    let shape_count = data.shapes.len();
    let mut min_gap = vec![vec![f64::INFINITY; shape_count]; shape_count];
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (labels[i], labels[j]);
            if a != b {
                let d = matrix.get(i, j);
                if d < min_gap[a][b] {
                    min_gap[a][b] = d;
                    min_gap[b][a] = d;
                }
            }
        }
    }
    for (a, row) in min_gap.iter().enumerate() {
        let (b, gap) = row
            .iter()
            .enumerate()
            .filter(|&(b, _)| b != a)
            .map(|(b, &gap)| (b, gap))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        println!("shape {a:2}: nearest shape {b:2} at gap {gap:.3}");
    }
    let neighborhoods = knn_neighborhoods(&matrix, k).unwrap();
    let mut radii: Vec<f64> = neighborhoods
        .iter()
        .map(|nb| {
            nb.members
                .iter()
                .map(|&j| matrix.get(nb.center, j))
                .fold(0.0, f64::max)
        })
        .collect();
    println!("kNN radius: {}", five_num(&mut radii));

    println!("\n== tolerance derivation ==");
    let ecdf = fit_ecdf(&neighborhoods).unwrap();
    let transformed = transform_distances(&matrix, &ecdf);
    let grid = ThresholdGrid::default_grid();
    let profiles = betti_profiles(&neighborhoods, &transformed, &grid);
    let changes = pooled_relative_changes(&neighborhoods, &profiles).unwrap();
    let (mut c0, mut c1) = (changes.beta0.clone(), changes.beta1.clone());
    println!(
        "beta0 changes: {}  undefined {}",
        five_num(&mut c0),
        changes.undefined_beta0
    );
    println!(
        "beta1 changes: {}  undefined {}",
        five_num(&mut c1),
        changes.undefined_beta1
    );
    println!(
        "auto taus: tau0 {:.4}  tau1 {:.4}",
        default_tau(&changes.beta0).unwrap(),
        default_tau(&changes.beta1).unwrap()
    );

    println!("\n== cbn ==");
    let start = Instant::now();
    let out = run_cbn(&data.cloud, &DistanceSpec::Euclidean, &CbnConfig::new(k)).unwrap();
    let elapsed = start.elapsed();
    let (rand, jaccard) = scores(&out.partition, &data.truth);
    println!(
        "tau0 {:.4}  tau1 {:.4}  clusters {}  rand {:.5}  jaccard {:.5}  [{elapsed:.2?}]",
        out.tau0,
        out.tau1,
        out.partition.cluster_count(),
        rand,
        jaccard
    );
    println!("sizes {:?}", sizes_desc(&out.partition));

    println!("\n== ablation (no refinement) ==");
    let unrefined = extract_clusters(&knn_digraph(&neighborhoods).unwrap(), ComponentMode::Strong);
    let (urand, ujaccard) = scores(&unrefined, &data.truth);
    println!(
        "clusters {}  rand {urand:.5}  jaccard {ujaccard:.5}  refined-refines {}",
        unrefined.cluster_count(),
        out.partition.is_refinement_of(&unrefined)
    );
    println!("sizes {:?}", sizes_desc(&unrefined));

    println!("\n== noisy run (200 noise points) ==");
    let noisy = benchmark13(BENCHMARK13_SEED, 200);
    let start = Instant::now();
    let nout = run_cbn(&noisy.cloud, &DistanceSpec::Euclidean, &CbnConfig::new(k)).unwrap();
    let elapsed = start.elapsed();
    let keep: Vec<bool> = noisy.noise.iter().map(|&b| !b).collect();
    let restricted = nout.partition.restrict(&keep).unwrap();
    let (nrand, njaccard) = scores(&restricted, &noisy.truth_without_noise().unwrap());
    println!(
        "tau0 {:.4}  tau1 {:.4}  clusters {}  restricted rand {nrand:.5}  jaccard {njaccard:.5}  [{elapsed:.2?}]",
        nout.tau0,
        nout.tau1,
        nout.partition.cluster_count()
    );
    println!("sizes {:?}", sizes_desc(&nout.partition));

    println!("\n== single linkage, max-gap cut ==");
    let single = hierarchical(&matrix, Linkage::Single, Cut::MaxGap).unwrap();
    let (srand, sjaccard) = scores(&single.partition, &data.truth);
    let heights: Vec<f64> = single
        .dendrogram
        .merges()
        .iter()
        .map(|m| m.height)
        .collect();
    let mut gaps: Vec<(f64, f64, f64)> = heights
        .windows(2)
        .map(|w| (w[1] - w[0], w[0], w[1]))
        .collect();
    gaps.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    println!(
        "clusters {}  rand {srand:.5}  jaccard {sjaccard:.5}",
        single.partition.cluster_count()
    );
    println!("top height gaps: {:?}", &gaps[..gaps.len().min(5)]);

    println!("\n== k-means, 13 centers, 10 seeds ==");
    let mut best: Option<(u64, f64, f64)> = None;
    for seed in 0..10 {
        let result = kmeans(&data.cloud, &KMeansConfig::new(13, seed)).unwrap();
        let (r, j) = scores(&result.partition, &data.truth);
        if best.is_none_or(|(_, br, _)| r > br) {
            best = Some((seed, r, j));
        }
    }
    let (seed, krand, kjaccard) = best.unwrap();
    println!("best seed {seed}: rand {krand:.5}  jaccard {kjaccard:.5}");

    println!("\n== acceptance bands ==");
    let checks = [
        ("rand >= 0.98", rand >= 0.98),
        ("jaccard >= 0.90", jaccard >= 0.90),
        (
            "taus in [0.2, 0.8]",
            (0.2..=0.8).contains(&out.tau0) && (0.2..=0.8).contains(&out.tau1),
        ),
        ("noisy >= 13 clusters", nout.partition.cluster_count() >= 13),
        ("noisy restricted rand >= 0.97", nrand >= 0.97),
        (
            "refined refines unrefined",
            out.partition.is_refinement_of(&unrefined),
        ),
        (
            "unrefined strictly fewer clusters",
            unrefined.cluster_count() < out.partition.cluster_count(),
        ),
        ("cbn rand >= single rand", rand >= srand),
        ("cbn rand >= kmeans rand", rand >= krand),
        (
            "kmeans jaccard <= cbn jaccard - 0.1",
            kjaccard <= jaccard - 0.1,
        ),
    ];
    for (name, ok) in checks {
        println!("{} {name}", if ok { "PASS" } else { "FAIL" });
    }
}
