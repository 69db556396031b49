//! Point-cloud container shared by every pipeline stage.

use crate::error::{Error, Result};
use std::collections::HashSet;

/// An ordered list of points in `R^m`, optionally tagged with unique string
/// identifiers (station names, row keys, ...).
///
/// All points share the same dimension `m >= 1` and every coordinate is
/// finite; both are checked at construction so downstream code can rely on
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    ids: Option<Vec<String>>,
}

impl PointCloud {
    /// Builds a cloud without identifiers.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(points, None)
    }

    /// Builds a cloud with one unique identifier per point.
    pub fn with_ids(points: Vec<Vec<f64>>, ids: Vec<String>) -> Result<Self> {
        Self::build(points, Some(ids))
    }

    fn build(points: Vec<Vec<f64>>, ids: Option<Vec<String>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let expected = points[0].len();
        if expected == 0 {
            return Err(Error::DimensionMismatch {
                index: 0,
                got: 0,
                expected: 1,
            });
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != expected {
                return Err(Error::DimensionMismatch {
                    index,
                    got: p.len(),
                    expected,
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoordinate { index });
            }
        }
        if let Some(ids) = &ids {
            if ids.len() != points.len() {
                return Err(Error::IdCountMismatch {
                    got: ids.len(),
                    expected: points.len(),
                });
            }
            let mut seen = HashSet::with_capacity(ids.len());
            for id in ids {
                if !seen.insert(id.as_str()) {
                    return Err(Error::DuplicateId(id.clone()));
                }
            }
        }
        Ok(PointCloud { points, ids })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false: empty clouds are rejected at construction.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Shared dimension of all points.
    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// Coordinates of point `i`.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    /// All points in order.
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Identifiers in point order, if the cloud carries them.
    pub fn ids(&self) -> Option<&[String]> {
        self.ids.as_deref()
    }

    /// Identifier of point `i`, if present.
    pub fn id_of(&self, i: usize) -> Option<&str> {
        self.ids.as_ref().map(|ids| ids[i].as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_cloud() {
        assert!(matches!(PointCloud::new(vec![]), Err(Error::EmptyCloud)));
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let err = PointCloud::new(vec![vec![0.0, 1.0], vec![2.0]]).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                index: 1,
                got: 1,
                expected: 2
            }
        ));
    }

    #[test]
    fn rejects_zero_dimensional_points() {
        assert!(PointCloud::new(vec![vec![]]).is_err());
    }

    #[test]
    fn rejects_non_finite_coordinates() {
        let err = PointCloud::new(vec![vec![0.0], vec![f64::NAN]]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteCoordinate { index: 1 }));
    }

    #[test]
    fn rejects_duplicate_ids() {
        let err = PointCloud::with_ids(vec![vec![0.0], vec![1.0]], vec!["a".into(), "a".into()])
            .unwrap_err();
        assert!(matches!(err, Error::DuplicateId(ref id) if id == "a"));
    }

    #[test]
    fn rejects_id_count_mismatch() {
        let err = PointCloud::with_ids(vec![vec![0.0], vec![1.0]], vec!["a".into()]).unwrap_err();
        assert!(matches!(
            err,
            Error::IdCountMismatch {
                got: 1,
                expected: 2
            }
        ));
    }

    #[test]
    fn accessors_round_trip() {
        let cloud = PointCloud::with_ids(
            vec![vec![0.0, 1.0], vec![2.0, 3.0]],
            vec!["a".into(), "b".into()],
        )
        .unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.dim(), 2);
        assert_eq!(cloud.point(1), &[2.0, 3.0]);
        assert_eq!(cloud.id_of(0), Some("a"));
        assert!(!cloud.is_empty());
    }
}
