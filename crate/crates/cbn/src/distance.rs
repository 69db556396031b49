//! Pairwise distance matrices under a handful of metrics.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::par;

/// How to turn a point cloud into pairwise distances.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum DistanceSpec {
    /// Straight-line distance. The default.
    #[default]
    Euclidean,
    /// Sum of absolute coordinate differences.
    Manhattan,
    /// Maximum absolute coordinate difference.
    Chebyshev,
    /// Caller-supplied matrix, validated against the cloud on use.
    Precomputed(DistanceMatrix),
}

/// Dense symmetric `n x n` distance matrix with a zero diagonal, stored
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a full square matrix given as rows. Checks shape, symmetry
    /// (tolerance `1e-9`), a zero diagonal, and nonnegative finite entries;
    /// entries are then mirrored from the upper triangle so the stored matrix
    /// is exactly symmetric.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidPrecomputed("matrix is empty".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidPrecomputed(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            let d = rows[i][i];
            if d.is_nan() || d.abs() > 1e-12 {
                return Err(Error::InvalidPrecomputed(format!(
                    "diagonal entry ({i},{i}) is {d}, expected 0"
                )));
            }
            for j in (i + 1)..n {
                let upper = rows[i][j];
                let lower = rows[j][i];
                if !upper.is_finite() || upper < 0.0 {
                    return Err(Error::InvalidPrecomputed(format!(
                        "entry ({i},{j}) is {upper}, expected a finite nonnegative value"
                    )));
                }
                if (upper - lower).abs() > 1e-9 {
                    return Err(Error::InvalidPrecomputed(format!(
                        "entries ({i},{j})={upper} and ({j},{i})={lower} differ by more than 1e-9"
                    )));
                }
                data[i * n + j] = upper;
                data[j * n + i] = upper;
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    /// Builds a matrix by evaluating `f(i, j)` on the upper triangle and
    /// mirroring. `f` must return finite nonnegative values.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64,
    {
        if n == 0 {
            return Err(Error::InvalidPrecomputed("matrix is empty".into()));
        }
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidPrecomputed(format!(
                        "entry ({i},{j}) is {d}, expected a finite nonnegative value"
                    )));
                }
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Ok(DistanceMatrix { n, data })
    }

    pub(crate) fn from_raw(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        DistanceMatrix { n, data }
    }

    /// Side length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance between points `i` and `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Row `i` as a slice of length `n`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }
}

fn metric_distance(a: &[f64], b: &[f64], spec: &DistanceSpec) -> f64 {
    match spec {
        DistanceSpec::Euclidean => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        DistanceSpec::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        DistanceSpec::Chebyshev => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
        DistanceSpec::Precomputed(_) => unreachable!("handled before dispatch"),
    }
}

/// Computes the full pairwise distance matrix for `cloud` under `spec`.
///
/// For `Precomputed`, the supplied matrix is checked against the cloud size
/// and returned as-is (symmetry and the zero diagonal were already enforced
/// when it was constructed).
pub fn build_distance_matrix(cloud: &PointCloud, spec: &DistanceSpec) -> Result<DistanceMatrix> {
    let n = cloud.len();
    if let DistanceSpec::Precomputed(m) = spec {
        if m.n() != n {
            return Err(Error::InvalidPrecomputed(format!(
                "matrix is {}x{} but the cloud has {n} points",
                m.n(),
                m.n()
            )));
        }
        return Ok(m.clone());
    }
    let rows: Vec<Vec<f64>> = par::map_range(n, |i| {
        let a = cloud.point(i);
        (0..n)
            .map(|j| {
                if i == j {
                    0.0
                } else {
                    metric_distance(a, cloud.point(j), spec)
                }
            })
            .collect()
    });
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        data.extend_from_slice(&row);
    }
    Ok(DistanceMatrix::from_raw(n, data))
}
