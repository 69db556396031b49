//! Empirical-CDF rescaling of distances.
//!
//! Pooling every within-neighborhood pair distance and mapping each distance
//! `d` to the fraction of pooled values `<= d` sends all distances to `[0, 1]`
//! while preserving their order, which lets one fixed threshold grid serve
//! data of any scale.

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::knn::Neighborhood;
use crate::par;

/// Empirical CDF of the pooled within-neighborhood pair distances.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfTransform {
    sorted: Vec<f64>,
}

impl EcdfTransform {
    /// Fraction of pooled values `<= t`. Nondecreasing in `t`, with values in
    /// `{0, 1/N, ..., 1}` where `N` is the pool size.
    pub fn eval(&self, t: f64) -> f64 {
        let below = self.sorted.partition_point(|v| *v <= t);
        below as f64 / self.sorted.len() as f64
    }

    /// Number of pooled values, multiplicities included.
    pub fn pool_size(&self) -> usize {
        self.sorted.len()
    }

    /// The pooled sample, sorted ascending.
    pub fn sorted_pool(&self) -> &[f64] {
        &self.sorted
    }
}

/// Pools the pair distances of every neighborhood (keeping multiplicities,
/// so distances shared by overlapping neighborhoods count once per
/// appearance) and fits their empirical CDF.
pub fn fit_ecdf(neighborhoods: &[Neighborhood]) -> Result<EcdfTransform> {
    let mut sorted: Vec<f64> = neighborhoods
        .iter()
        .flat_map(|nb| nb.pair_distances.iter().copied())
        .collect();
    if sorted.is_empty() {
        return Err(Error::EmptyDistancePool);
    }
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(EcdfTransform { sorted })
}

/// Applies the CDF entrywise to a distance matrix. The diagonal stays exactly
/// zero and symmetry is preserved (equal inputs map to equal outputs).
pub fn transform_distances(matrix: &DistanceMatrix, ecdf: &EcdfTransform) -> DistanceMatrix {
    let n = matrix.n();
    let rows: Vec<Vec<f64>> = par::map_range(n, |i| {
        let row = matrix.row(i);
        (0..n)
            .map(|j| if i == j { 0.0 } else { ecdf.eval(row[j]) })
            .collect()
    });
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        data.extend_from_slice(&row);
    }
    DistanceMatrix::from_raw(n, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pool_transform(values: &[f64]) -> EcdfTransform {
        let nb = Neighborhood {
            center: 0,
            members: Vec::new(),
            pair_distances: values.to_vec(),
        };
        fit_ecdf(&[nb]).unwrap()
    }

    #[test]
    fn eval_counts_values_at_or_below_threshold() {
        let f = pool_transform(&[0.5, 0.1, 0.3, 0.3]);
        assert_eq!(f.eval(0.05), 0.0);
        assert_eq!(f.eval(0.1), 0.25);
        assert_eq!(f.eval(0.3), 0.75);
        assert_eq!(f.eval(0.4), 0.75);
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(9.0), 1.0);
    }

    #[test]
    fn duplicates_keep_their_multiplicity() {
        let f = pool_transform(&[1.0, 1.0, 1.0, 2.0]);
        assert_eq!(f.pool_size(), 4);
        assert_eq!(f.eval(1.0), 0.75);
    }

    #[test]
    fn empty_pool_is_rejected() {
        let nb = Neighborhood {
            center: 0,
            members: vec![0],
            pair_distances: vec![],
        };
        assert!(matches!(fit_ecdf(&[nb]), Err(Error::EmptyDistancePool)));
    }

    #[test]
    fn transform_keeps_zero_diagonal_and_symmetry() {
        let m = DistanceMatrix::from_rows(vec![
            vec![0.0, 2.0, 8.0],
            vec![2.0, 0.0, 4.0],
            vec![8.0, 4.0, 0.0],
        ])
        .unwrap();
        let f = pool_transform(&[2.0, 4.0, 8.0]);
        let t = transform_distances(&m, &f);
        for i in 0..3 {
            assert_eq!(t.get(i, i), 0.0);
            for j in 0..3 {
                assert_eq!(t.get(i, j).to_bits(), t.get(j, i).to_bits());
            }
        }
        assert_eq!(t.get(0, 1), 1.0 / 3.0);
        assert_eq!(t.get(1, 2), 2.0 / 3.0);
        assert_eq!(t.get(0, 2), 1.0);
    }

    proptest! {
        #[test]
        fn ecdf_is_nondecreasing_with_unit_range(
            mut values in proptest::collection::vec(0.0f64..1e6, 1..200),
            probes in proptest::collection::vec(-1.0f64..2e6, 1..50),
        ) {
            let f = pool_transform(&values);
            let n = f.pool_size() as f64;
            let mut sorted_probes = probes;
            sorted_probes.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut prev = 0.0;
            for p in sorted_probes {
                let v = f.eval(p);
                prop_assert!((0.0..=1.0).contains(&v));
                prop_assert!(v >= prev);
                // Every value is an integer multiple of 1/N.
                prop_assert!(((v * n).round() - v * n).abs() < 1e-9);
                prev = v;
            }
            values.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assert_eq!(f.eval(*values.last().unwrap()), 1.0);
            prop_assert!(f.eval(values[0]) >= 1.0 / n);
        }
    }
}
