//! Synthetic 2-D datasets with ground-truth labels.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::partition::Partition;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Geometry of one sampled shape, in local coordinates before rotation and
/// translation. `scale` below sets the overall size; the enum parameters are
/// proportions except where noted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeKind {
    /// Filled disk of radius `scale`.
    Disk,
    /// Ring with outer radius `scale` and inner radius
    /// `inner_fraction * scale`, `0 <= inner_fraction < 1`.
    Annulus { inner_fraction: f64 },
    /// Axis-aligned box, width `scale`, height `aspect * scale`.
    Rectangle { aspect: f64 },
    /// Disk of radius `scale` with a disk of radius `notch_fraction * scale`
    /// centered at `(notch_offset * scale, 0)` removed.
    Crescent {
        notch_fraction: f64,
        notch_offset: f64,
    },
    /// Band of vertical half-thickness `half_thickness` (absolute units)
    /// around one sine arc: `y = amplitude * sin(2 pi * cycles * t)` for
    /// `t` in `[0, 1]` along a baseline of length `scale`. `amplitude` is
    /// also in absolute units.
    SineStrip {
        cycles: f64,
        amplitude: f64,
        half_thickness: f64,
    },
}

/// A shape placed in the plane with a point budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    /// World position of the shape's local origin.
    pub center: [f64; 2],
    /// Size, see [`ShapeKind`]. Must be positive.
    pub scale: f64,
    /// Counterclockwise rotation in radians.
    pub rotation: f64,
    /// Number of points to sample, at least 1.
    pub count: usize,
}

impl ShapeSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |why: String| Err(Error::Synth(why));
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return fail(format!(
                "scale must be positive and finite, got {}",
                self.scale
            ));
        }
        if !self.rotation.is_finite() || !self.center.iter().all(|c| c.is_finite()) {
            return fail("center and rotation must be finite".into());
        }
        if self.count == 0 {
            return fail("count must be at least 1".into());
        }
        match self.kind {
            ShapeKind::Disk => Ok(()),
            ShapeKind::Annulus { inner_fraction } => {
                if (0.0..1.0).contains(&inner_fraction) {
                    Ok(())
                } else {
                    fail(format!(
                        "annulus inner fraction must be in [0, 1), got {inner_fraction}"
                    ))
                }
            }
            ShapeKind::Rectangle { aspect } => {
                if aspect > 0.0 && aspect.is_finite() {
                    Ok(())
                } else {
                    fail(format!("rectangle aspect must be positive, got {aspect}"))
                }
            }
            ShapeKind::Crescent {
                notch_fraction,
                notch_offset,
            } => {
                if !(notch_fraction > 0.0 && notch_fraction.is_finite()) {
                    return fail(format!(
                        "crescent notch fraction must be positive, got {notch_fraction}"
                    ));
                }
                if !(notch_offset >= 0.0 && notch_offset.is_finite()) {
                    return fail(format!(
                        "crescent notch offset must be nonnegative, got {notch_offset}"
                    ));
                }
                // The notch must leave the far side of the disk uncovered.
                if notch_fraction >= notch_offset + 1.0 {
                    return fail("crescent notch covers the whole disk".into());
                }
                Ok(())
            }
            ShapeKind::SineStrip {
                cycles,
                amplitude,
                half_thickness,
            } => {
                if !(cycles > 0.0 && cycles.is_finite()) {
                    return fail(format!("sine cycles must be positive, got {cycles}"));
                }
                if !(amplitude >= 0.0 && amplitude.is_finite()) {
                    return fail(format!(
                        "sine amplitude must be nonnegative, got {amplitude}"
                    ));
                }
                if !(half_thickness > 0.0 && half_thickness.is_finite()) {
                    return fail(format!(
                        "sine half thickness must be positive, got {half_thickness}"
                    ));
                }
                Ok(())
            }
        }
    }

    /// Axis-aligned bounds of the shape in local coordinates.
    fn local_bbox(&self) -> ([f64; 2], [f64; 2]) {
        let s = self.scale;
        match self.kind {
            ShapeKind::Disk | ShapeKind::Annulus { .. } | ShapeKind::Crescent { .. } => {
                ([-s, -s], [s, s])
            }
            ShapeKind::Rectangle { aspect } => {
                ([-s / 2.0, -aspect * s / 2.0], [s / 2.0, aspect * s / 2.0])
            }
            ShapeKind::SineStrip {
                amplitude,
                half_thickness,
                ..
            } => (
                [-s / 2.0, -(amplitude + half_thickness)],
                [s / 2.0, amplitude + half_thickness],
            ),
        }
    }

    fn contains_local(&self, x: f64, y: f64) -> bool {
        let s = self.scale;
        match self.kind {
            ShapeKind::Disk => x * x + y * y <= s * s,
            ShapeKind::Annulus { inner_fraction } => {
                let rr = x * x + y * y;
                let inner = inner_fraction * s;
                inner * inner <= rr && rr <= s * s
            }
            ShapeKind::Rectangle { aspect } => x.abs() <= s / 2.0 && y.abs() <= aspect * s / 2.0,
            ShapeKind::Crescent {
                notch_fraction,
                notch_offset,
            } => {
                if x * x + y * y > s * s {
                    return false;
                }
                let dx = x - notch_offset * s;
                let notch = notch_fraction * s;
                dx * dx + y * y > notch * notch
            }
            ShapeKind::SineStrip {
                cycles,
                amplitude,
                half_thickness,
            } => {
                if x.abs() > s / 2.0 {
                    return false;
                }
                let t = x / s + 0.5;
                let mid = amplitude * (std::f64::consts::TAU * cycles * t).sin();
                (y - mid).abs() <= half_thickness
            }
        }
    }

    /// True when the world-coordinate point lies inside the shape.
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let (dx, dy) = (p[0] - self.center[0], p[1] - self.center[1]);
        let (sin, cos) = self.rotation.sin_cos();
        // Inverse rotation.
        let x = cos * dx + sin * dy;
        let y = -sin * dx + cos * dy;
        self.contains_local(x, y)
    }

    fn to_world(self, x: f64, y: f64) -> [f64; 2] {
        let (sin, cos) = self.rotation.sin_cos();
        [
            self.center[0] + cos * x - sin * y,
            self.center[1] + sin * x + cos * y,
        ]
    }

    /// Axis-aligned world bounds (of the rotated local bounding box, so a
    /// conservative cover of the shape).
    pub fn world_bbox(&self) -> BoundingBox {
        let (lo, hi) = self.local_bbox();
        let corners = [
            self.to_world(lo[0], lo[1]),
            self.to_world(lo[0], hi[1]),
            self.to_world(hi[0], lo[1]),
            self.to_world(hi[0], hi[1]),
        ];
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for c in corners {
            for d in 0..2 {
                min[d] = min[d].min(c[d]);
                max[d] = max[d].max(c[d]);
            }
        }
        BoundingBox { min, max }
    }
}

/// Axis-aligned rectangle, used both as the noise region and as a validity
/// bound for shape placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl BoundingBox {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Result<Self> {
        if !(min[0] < max[0] && min[1] < max[1]) || !min.iter().chain(&max).all(|v| v.is_finite()) {
            return Err(Error::Synth(format!(
                "degenerate bounding box [{}, {}] x [{}, {}]",
                min[0], max[0], min[1], max[1]
            )));
        }
        Ok(BoundingBox { min, max })
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        (self.min[0]..=self.max[0]).contains(&p[0]) && (self.min[1]..=self.max[1]).contains(&p[1])
    }
}

/// A generated dataset: the points, the ground-truth grouping (noise points,
/// when present, share one final group), the noise mask, and the shapes that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub cloud: PointCloud,
    pub truth: Partition,
    pub noise: Vec<bool>,
    pub shapes: Vec<ShapeSpec>,
    pub bbox: BoundingBox,
    pub seed: u64,
}

impl SyntheticDataset {
    /// Ground truth restricted to the shape points.
    pub fn truth_without_noise(&self) -> Result<Partition> {
        let keep: Vec<bool> = self.noise.iter().map(|&n| !n).collect();
        self.truth.restrict(&keep)
    }
}

const MAX_REJECTION_FACTOR: usize = 1000;

fn sample_shape(shape: &ShapeSpec, rng: &mut ChaCha8Rng) -> Result<Vec<[f64; 2]>> {
    let (lo, hi) = shape.local_bbox();
    let mut points = Vec::with_capacity(shape.count);
    let budget = MAX_REJECTION_FACTOR * (shape.count + 10);
    let mut attempts = 0usize;
    while points.len() < shape.count {
        if attempts >= budget {
            return Err(Error::Synth(format!(
                "shape acceptance rate below {:.4}, geometry is too thin to sample",
                1.0 / MAX_REJECTION_FACTOR as f64
            )));
        }
        attempts += 1;
        let x = rng.random_range(lo[0]..hi[0]);
        let y = rng.random_range(lo[1]..hi[1]);
        if shape.contains_local(x, y) {
            points.push(shape.to_world(x, y));
        }
    }
    Ok(points)
}

/// Samples every shape in order, then `noise_count` uniform points over
/// `bbox`, all from one stream seeded with `seed`. Each shape must fit
/// inside `bbox`. Points appear shape by shape, noise last, and the truth
/// partition labels points by originating shape.
pub fn generate(
    shapes: &[ShapeSpec],
    noise_count: usize,
    bbox: &BoundingBox,
    seed: u64,
) -> Result<SyntheticDataset> {
    if shapes.is_empty() {
        return Err(Error::Synth("no shapes given".into()));
    }
    for (i, shape) in shapes.iter().enumerate() {
        shape.validate()?;
        let wb = shape.world_bbox();
        if !(bbox.contains(wb.min) && bbox.contains(wb.max)) {
            return Err(Error::Synth(format!(
                "shape {i} does not fit inside the bounding box"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = shapes.iter().map(|s| s.count).sum::<usize>() + noise_count;
    let mut points = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    let mut noise = Vec::with_capacity(total);
    for (label, shape) in shapes.iter().enumerate() {
        for p in sample_shape(shape, &mut rng)? {
            points.push(vec![p[0], p[1]]);
            labels.push(label);
            noise.push(false);
        }
    }
    for _ in 0..noise_count {
        let x = rng.random_range(bbox.min[0]..bbox.max[0]);
        let y = rng.random_range(bbox.min[1]..bbox.max[1]);
        points.push(vec![x, y]);
        labels.push(shapes.len());
        noise.push(true);
    }
    Ok(SyntheticDataset {
        cloud: PointCloud::new(points)?,
        truth: Partition::from_labels(labels)?,
        noise,
        shapes: shapes.to_vec(),
        bbox: *bbox,
        seed,
    })
}

/// Seed used by the stock benchmark unless the caller picks another.
pub const BENCHMARK13_SEED: u64 = 13;

/// Nominal bounding box of the stock benchmark (also the noise region).
pub fn benchmark13_bbox() -> BoundingBox {
    BoundingBox::new([0.0, 0.0], [150.0, 100.0]).expect("fixed box is valid")
}

/// The thirteen shapes of the stock benchmark. Counts are proportional to
/// area (about 1.74 points per square unit, 3800 points in total) so density
/// is uniform across shapes.
///
/// The layout bakes in two traps. One pair of disks is separated by only
/// 3.5 units, close enough to tempt linkage methods into merging it while
/// staying several nearest-neighbor spacings wide. And each of the three
/// rings carries a smaller disk inside its hole with a 3-unit radial gap:
/// no hyperplane separates a ring from its core, so centroid methods must
/// either lump the pair or shear it in half. All other shape gaps are at
/// least 12 units.
pub fn benchmark13_shapes() -> Vec<ShapeSpec> {
    let shape = |kind, center, scale, rotation, count| ShapeSpec {
        kind,
        center,
        scale,
        rotation,
        count,
    };
    let ring = |inner_fraction| ShapeKind::Annulus { inner_fraction };
    vec![
        shape(ShapeKind::Disk, [14.0, 16.0], 10.0, 0.0, 546),
        shape(ShapeKind::Disk, [45.0, 16.0], 8.0, 0.0, 349),
        shape(ShapeKind::Disk, [63.0, 16.0], 6.5, 0.0, 231),
        shape(ring(0.65), [94.5, 16.0], 12.0, 0.0, 454),
        shape(ShapeKind::Disk, [94.5, 16.0], 4.8, 0.0, 126),
        shape(ring(0.65), [16.0, 52.0], 12.0, 0.0, 454),
        shape(ShapeKind::Disk, [16.0, 52.0], 4.8, 0.0, 126),
        shape(ring(0.68), [127.0, 52.0], 11.0, 0.0, 355),
        shape(ShapeKind::Disk, [127.0, 52.0], 4.4, 0.0, 106),
        shape(
            ShapeKind::Rectangle { aspect: 0.32 },
            [129.5, 16.0],
            22.0,
            0.0,
            269,
        ),
        shape(
            ShapeKind::Crescent {
                notch_fraction: 0.8,
                notch_offset: 0.7,
            },
            [49.0, 52.0],
            9.0,
            std::f64::consts::FRAC_PI_2,
            260,
        ),
        shape(
            ShapeKind::SineStrip {
                cycles: 1.0,
                amplitude: 4.5,
                half_thickness: 2.5,
            },
            [87.0, 52.0],
            34.0,
            0.0,
            295,
        ),
        shape(
            ShapeKind::SineStrip {
                cycles: 1.5,
                amplitude: 4.0,
                half_thickness: 2.2,
            },
            [75.0, 84.0],
            30.0,
            0.0,
            229,
        ),
    ]
}

/// The stock benchmark: thirteen shapes of five kinds, 3800 points, plus
/// `noise_count` uniform points over the enclosing box.
pub fn benchmark13(seed: u64, noise_count: usize) -> SyntheticDataset {
    generate(
        &benchmark13_shapes(),
        noise_count,
        &benchmark13_bbox(),
        seed,
    )
    .expect("stock benchmark layout is valid")
}

fn push_sig9(out: &mut String, v: f64) {
    use std::fmt::Write;
    if v == 0.0 {
        out.push_str("0.00000000");
        return;
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (8 - exp).clamp(0, 17) as usize;
    write!(out, "{v:.decimals$}").expect("writing to a String cannot fail");
}

/// Renders a dataset as CSV with header `x,y,label,is_noise`. Coordinates
/// carry 9 significant digits; noise rows get label -1 and `is_noise` 1.
pub fn to_csv(dataset: &SyntheticDataset) -> String {
    let mut out = String::with_capacity(dataset.cloud.len() * 32 + 16);
    out.push_str("x,y,label,is_noise\n");
    for i in 0..dataset.cloud.len() {
        let p = dataset.cloud.point(i);
        push_sig9(&mut out, p[0]);
        out.push(',');
        push_sig9(&mut out, p[1]);
        if dataset.noise[i] {
            out.push_str(",-1,1\n");
        } else {
            use std::fmt::Write;
            writeln!(out, ",{},0", dataset.truth.label(i)).expect("write to String");
        }
    }
    out
}
