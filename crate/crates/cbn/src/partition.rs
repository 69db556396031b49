//! Cluster partitions over an indexed point set.

use crate::error::{Error, Result};

/// Assignment of each point to exactly one cluster. Labels are contiguous
/// integers starting at 0, numbered by first occurrence in point order, so
/// two runs producing the same grouping produce identical labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    cluster_count: usize,
}

impl Partition {
    /// Wraps labels that are already contiguous from 0. Rejects empty label
    /// lists and label sets with gaps.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidLabels("no points".into()));
        }
        let cluster_count = labels.iter().max().unwrap() + 1;
        let mut seen = vec![false; cluster_count];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidLabels(format!(
                "label {missing} is unused while {} is present",
                cluster_count - 1
            )));
        }
        Ok(Partition {
            labels,
            cluster_count,
        })
    }

    /// Renumbers arbitrary labels by first occurrence. `raw` may use any
    /// label values; points sharing a raw label share a final label.
    pub fn canonicalize(raw: &[usize]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidLabels("no points".into()));
        }
        let max = *raw.iter().max().unwrap();
        let mut remap: Vec<usize> = vec![usize::MAX; max + 1];
        let mut next = 0usize;
        let labels = raw
            .iter()
            .map(|&r| {
                if remap[r] == usize::MAX {
                    remap[r] = next;
                    next += 1;
                }
                remap[r]
            })
            .collect();
        Ok(Partition {
            labels,
            cluster_count: next,
        })
    }

    /// One cluster per point.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::from_labels((0..n).collect())
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Never true: empty partitions are rejected at construction.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of clusters.
    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    /// Label of point `i`.
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// All labels in point order.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Cluster sizes indexed by label.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.cluster_count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Point indices of each cluster, indexed by label.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cluster_count];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    /// Partition of the subset where `keep[i]` is true, relabeled by first
    /// occurrence within the subset. Errors if `keep` has the wrong length or
    /// keeps nothing.
    pub fn restrict(&self, keep: &[bool]) -> Result<Partition> {
        if keep.len() != self.labels.len() {
            return Err(Error::PartitionSizeMismatch {
                got: keep.len(),
                expected: self.labels.len(),
            });
        }
        let raw: Vec<usize> = self
            .labels
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&l, _)| l)
            .collect();
        Partition::canonicalize(&raw)
    }

    /// True when every cluster of `self` lies inside a single cluster of
    /// `coarser` (sizes must match).
    pub fn is_refinement_of(&self, coarser: &Partition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image: Vec<Option<usize>> = vec![None; self.cluster_count];
        for (i, &l) in self.labels.iter().enumerate() {
            match image[l] {
                None => image[l] = Some(coarser.labels[i]),
                Some(target) if target != coarser.labels[i] => return false,
                _ => {}
            }
        }
        true
    }

    /// True when both partitions group points identically (labels are already
    /// canonical, so this is plain equality of labels).
    pub fn same_clustering(&self, other: &Partition) -> bool {
        self.labels == other.labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_labels_requires_contiguity() {
        assert!(Partition::from_labels(vec![0, 1, 2]).is_ok());
        assert!(matches!(
            Partition::from_labels(vec![0, 2]),
            Err(Error::InvalidLabels(_))
        ));
        assert!(Partition::from_labels(vec![]).is_err());
    }

    #[test]
    fn canonicalize_renumbers_by_first_occurrence() {
        let p = Partition::canonicalize(&[7, 7, 3, 7, 3, 9]).unwrap();
        assert_eq!(p.labels(), &[0, 0, 1, 0, 1, 2]);
        assert_eq!(p.cluster_count(), 3);
    }

    #[test]
    fn sizes_and_clusters_agree() {
        let p = Partition::from_labels(vec![0, 1, 0, 2, 1]).unwrap();
        assert_eq!(p.cluster_sizes(), vec![2, 2, 1]);
        assert_eq!(p.clusters(), vec![vec![0, 2], vec![1, 4], vec![3]]);
    }

    #[test]
    fn restrict_relabels_the_subset() {
        let p = Partition::from_labels(vec![0, 1, 0, 2, 1]).unwrap();
        let keep = [false, true, true, true, true];
        let r = p.restrict(&keep).unwrap();
        assert_eq!(r.labels(), &[0, 1, 2, 0]);
        assert!(p.restrict(&[true]).is_err());
        assert!(p.restrict(&[false; 5]).is_err());
    }

    #[test]
    fn refinement_checks_cluster_containment() {
        let fine = Partition::from_labels(vec![0, 1, 1, 2, 3]).unwrap();
        let coarse = Partition::from_labels(vec![0, 0, 0, 1, 1]).unwrap();
        assert!(fine.is_refinement_of(&coarse));
        assert!(!coarse.is_refinement_of(&fine));
        assert!(fine.is_refinement_of(&fine));
        let other = Partition::from_labels(vec![0, 0]).unwrap();
        assert!(!fine.is_refinement_of(&other));
    }

    #[test]
    fn singletons_partition_every_point_apart() {
        let p = Partition::singletons(3).unwrap();
        assert_eq!(p.labels(), &[0, 1, 2]);
        assert_eq!(p.cluster_count(), 3);
    }
}
