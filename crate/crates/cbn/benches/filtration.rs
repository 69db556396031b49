use cbn::distance::{build_distance_matrix, DistanceSpec};
use cbn::ecdf::{fit_ecdf, transform_distances};
use cbn::homology::{betti_profiles, betti_profiles_seq, ThresholdGrid};
use cbn::knn::knn_neighborhoods;
use cbn::pipeline::{run_cbn, CbnConfig};
use cbn::synth::{generate, BoundingBox, ShapeKind, ShapeSpec};
use cbn::PointCloud;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_cloud(points_per_shape: usize) -> PointCloud {
    let shapes = vec![
        ShapeSpec {
            kind: ShapeKind::Disk,
            center: [12.0, 15.0],
            scale: 8.0,
            rotation: 0.0,
            count: points_per_shape,
        },
        ShapeSpec {
            kind: ShapeKind::Annulus {
                inner_fraction: 0.5,
            },
            center: [40.0, 15.0],
            scale: 9.0,
            rotation: 0.0,
            count: points_per_shape,
        },
        ShapeSpec {
            kind: ShapeKind::Rectangle { aspect: 0.3 },
            center: [68.0, 15.0],
            scale: 16.0,
            rotation: 0.3,
            count: points_per_shape,
        },
    ];
    let bbox = BoundingBox::new([0.0, 0.0], [80.0, 30.0]).unwrap();
    generate(&shapes, 0, &bbox, 7).unwrap().cloud
}

fn profile_benches(c: &mut Criterion) {
    let cloud = bench_cloud(200);
    let matrix = build_distance_matrix(&cloud, &DistanceSpec::Euclidean).unwrap();
    let neighborhoods = knn_neighborhoods(&matrix, 12).unwrap();
    let transform = fit_ecdf(&neighborhoods).unwrap();
    let transformed = transform_distances(&matrix, &transform);
    let grid = ThresholdGrid::default_grid();

    let mut group = c.benchmark_group("betti_profiles");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| betti_profiles_seq(black_box(&neighborhoods), &transformed, &grid))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| betti_profiles(black_box(&neighborhoods), &transformed, &grid))
    });
    #[cfg(not(feature = "parallel"))]
    let _ = betti_profiles;
    group.finish();
}

fn pipeline_benches(c: &mut Criterion) {
    let cloud = bench_cloud(120);
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("default_threads", |b| {
        b.iter(|| {
            run_cbn(
                black_box(&cloud),
                &DistanceSpec::Euclidean,
                &CbnConfig::new(12),
            )
            .unwrap()
        })
    });
    #[cfg(feature = "parallel")]
    group.bench_function("one_thread", |b| {
        let mut config = CbnConfig::new(12);
        config.threads = 1;
        b.iter(|| run_cbn(black_box(&cloud), &DistanceSpec::Euclidean, &config).unwrap())
    });
    group.finish();
}

criterion_group!(benches, profile_benches, pipeline_benches);
criterion_main!(benches);
