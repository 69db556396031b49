//! k-nearest neighborhoods over a distance matrix.

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::par;

/// The `k` points nearest to a center (the center itself included), plus the
/// pairwise distances among them.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood {
    /// Index of the point this neighborhood belongs to.
    pub center: usize,
    /// Member point indices, the center among them, sorted by
    /// (distance to center, index). Length `k`.
    pub members: Vec<usize>,
    /// Distances between member pairs `(members[a], members[b])` for `a < b`,
    /// in lexicographic `(a, b)` order. Length `k * (k - 1) / 2`.
    pub pair_distances: Vec<f64>,
}

impl Neighborhood {
    /// Number of members.
    pub fn k(&self) -> usize {
        self.members.len()
    }
}

fn neighborhood_of(matrix: &DistanceMatrix, center: usize, k: usize) -> Neighborhood {
    let n = matrix.n();
    let row = matrix.row(center);
    let mut members: Vec<usize>;
    if k == n {
        members = (0..n).collect();
    } else {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != center).collect();
        let key = |j: &usize| (row[*j], *j);
        if k > 1 {
            others.select_nth_unstable_by(k - 2, |a, b| key(a).partial_cmp(&key(b)).unwrap());
        }
        members = others[..k - 1].to_vec();
        members.push(center);
    }
    members.sort_unstable_by(|a, b| (row[*a], *a).partial_cmp(&(row[*b], *b)).unwrap());

    let mut pair_distances = Vec::with_capacity(k * (k - 1) / 2);
    for a in 0..k {
        for b in (a + 1)..k {
            pair_distances.push(matrix.get(members[a], members[b]));
        }
    }
    Neighborhood {
        center,
        members,
        pair_distances,
    }
}

/// Builds one neighborhood per point: the `k` nearest points to each center,
/// the center itself included, with distance ties broken toward the smaller
/// point index.
pub fn knn_neighborhoods(matrix: &DistanceMatrix, k: usize) -> Result<Vec<Neighborhood>> {
    let n = matrix.n();
    if k < 1 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    Ok(par::map_range(n, |i| neighborhood_of(matrix, i, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::PointCloud;
    use crate::distance::{build_distance_matrix, DistanceSpec};

    fn line_matrix() -> DistanceMatrix {
        // Points at x = 0, 1, 2, 10.
        let cloud = PointCloud::new(vec![vec![0.0], vec![1.0], vec![2.0], vec![10.0]]).unwrap();
        build_distance_matrix(&cloud, &DistanceSpec::Euclidean).unwrap()
    }

    #[test]
    fn members_include_center_and_are_sorted_by_distance() {
        let nbhds = knn_neighborhoods(&line_matrix(), 3).unwrap();
        assert_eq!(nbhds[0].members, vec![0, 1, 2]);
        assert_eq!(nbhds[3].members, vec![3, 2, 1]);
        for nb in &nbhds {
            assert!(nb.members.contains(&nb.center));
            assert_eq!(nb.k(), 3);
            assert_eq!(nb.pair_distances.len(), 3);
        }
    }

    #[test]
    fn distance_ties_break_toward_smaller_index() {
        // Points 1 and 2 are both at distance 1 from point 0; k = 2 keeps
        // only one of them.
        let cloud = PointCloud::new(vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let m = build_distance_matrix(&cloud, &DistanceSpec::Euclidean).unwrap();
        let nbhds = knn_neighborhoods(&m, 2).unwrap();
        assert_eq!(nbhds[0].members, vec![0, 1]);
    }

    #[test]
    fn pair_distances_follow_member_order() {
        let m = line_matrix();
        let nbhds = knn_neighborhoods(&m, 3).unwrap();
        let nb = &nbhds[1];
        assert_eq!(nb.members, vec![1, 0, 2]);
        assert_eq!(nb.pair_distances, vec![1.0, 1.0, 2.0]);
    }

    #[test]
    fn k_equal_one_gives_singleton_neighborhoods() {
        let nbhds = knn_neighborhoods(&line_matrix(), 1).unwrap();
        for (i, nb) in nbhds.iter().enumerate() {
            assert_eq!(nb.members, vec![i]);
            assert!(nb.pair_distances.is_empty());
        }
    }

    #[test]
    fn k_equal_n_takes_everything() {
        let nbhds = knn_neighborhoods(&line_matrix(), 4).unwrap();
        for nb in &nbhds {
            assert_eq!(nb.k(), 4);
            assert_eq!(nb.pair_distances.len(), 6);
        }
    }

    #[test]
    fn out_of_range_k_is_rejected() {
        let m = line_matrix();
        assert!(matches!(
            knn_neighborhoods(&m, 0),
            Err(Error::InvalidK { k: 0, n: 4 })
        ));
        assert!(matches!(
            knn_neighborhoods(&m, 5),
            Err(Error::InvalidK { k: 5, n: 4 })
        ));
    }
}
