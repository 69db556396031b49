//! Pair-counting agreement between two partitions.

use crate::error::{Error, Result};
use crate::par;
use crate::partition::Partition;

/// Counts over all unordered point pairs, classified by whether the pair
/// shares a cluster in the reference and in the candidate partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// Together in both.
    pub true_positive: u64,
    /// Apart in both.
    pub true_negative: u64,
    /// Together in the candidate only.
    pub false_positive: u64,
    /// Together in the reference only.
    pub false_negative: u64,
}

impl PairCounts {
    /// Total number of unordered pairs, `n * (n - 1) / 2`.
    pub fn total(&self) -> u64 {
        self.true_positive + self.true_negative + self.false_positive + self.false_negative
    }
}

/// Classifies every unordered pair of points. Both partitions must cover the
/// same points in the same order, and there must be at least two points.
pub fn pair_counts(reference: &Partition, candidate: &Partition) -> Result<PairCounts> {
    let n = reference.len();
    if candidate.len() != n {
        return Err(Error::PartitionSizeMismatch {
            got: candidate.len(),
            expected: n,
        });
    }
    if n < 2 {
        return Err(Error::TooFewPoints);
    }
    let ref_labels = reference.labels();
    let cand_labels = candidate.labels();
    let counts = par::sum_range(n, |i| {
        let mut local = [0u64; 4];
        let (ri, ci) = (ref_labels[i], cand_labels[i]);
        for j in (i + 1)..n {
            let same_ref = ri == ref_labels[j];
            let same_cand = ci == cand_labels[j];
            let slot = match (same_ref, same_cand) {
                (true, true) => 0,
                (false, false) => 1,
                (false, true) => 2,
                (true, false) => 3,
            };
            local[slot] += 1;
        }
        local
    });
    Ok(PairCounts {
        true_positive: counts[0],
        true_negative: counts[1],
        false_positive: counts[2],
        false_negative: counts[3],
    })
}

/// Fraction of pairs on which the partitions agree:
/// `(TP + TN) / (TP + TN + FP + FN)`.
pub fn rand_index(counts: &PairCounts) -> f64 {
    (counts.true_positive + counts.true_negative) as f64 / counts.total() as f64
}

/// Jaccard ratio of together-pairs: `TP / (TP + FP + FN)`. When neither
/// partition puts any pair together there is nothing to disagree about and
/// the index is 1.
pub fn jaccard_index(counts: &PairCounts) -> f64 {
    let denom = counts.true_positive + counts.false_positive + counts.false_negative;
    if denom == 0 {
        1.0
    } else {
        counts.true_positive as f64 / denom as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn partition(labels: &[usize]) -> Partition {
        Partition::canonicalize(labels).unwrap()
    }

    #[test]
    fn counts_match_hand_enumeration() {
        // Points 0..4; reference {01|23}, candidate {012|3}.
        let reference = partition(&[0, 0, 1, 1]);
        let candidate = partition(&[0, 0, 0, 1]);
        let c = pair_counts(&reference, &candidate).unwrap();
        // Pairs: 01 TP; 02,12 FP; 23 FN; 03,13 TN.
        assert_eq!(c.true_positive, 1);
        assert_eq!(c.false_positive, 2);
        assert_eq!(c.false_negative, 1);
        assert_eq!(c.true_negative, 2);
        assert_eq!(c.total(), 6);
        assert_eq!(rand_index(&c), 0.5);
        assert_eq!(jaccard_index(&c), 0.25);
    }

    #[test]
    fn identical_partitions_score_one() {
        let p = partition(&[0, 1, 0, 2, 1]);
        let c = pair_counts(&p, &p).unwrap();
        assert_eq!(c.false_positive, 0);
        assert_eq!(c.false_negative, 0);
        assert_eq!(rand_index(&c), 1.0);
        assert_eq!(jaccard_index(&c), 1.0);
    }

    #[test]
    fn all_singletons_vs_itself_hits_the_degenerate_jaccard_case() {
        let p = Partition::singletons(4).unwrap();
        let c = pair_counts(&p, &p).unwrap();
        assert_eq!(c.true_positive, 0);
        assert_eq!(jaccard_index(&c), 1.0);
        assert_eq!(rand_index(&c), 1.0);
    }

    #[test]
    fn one_cluster_vs_singletons() {
        let one = partition(&[0, 0, 0]);
        let single = Partition::singletons(3).unwrap();
        let c = pair_counts(&one, &single).unwrap();
        assert_eq!(c.false_negative, 3);
        assert_eq!(rand_index(&c), 0.0);
        assert_eq!(jaccard_index(&c), 0.0);
    }

    #[test]
    fn size_mismatch_and_tiny_inputs_are_rejected() {
        let a = partition(&[0, 0]);
        let b = partition(&[0, 0, 0]);
        assert!(pair_counts(&a, &b).is_err());
        let tiny = partition(&[0]);
        assert!(matches!(
            pair_counts(&tiny, &tiny),
            Err(Error::TooFewPoints)
        ));
    }

    proptest! {
        #[test]
        fn swapping_arguments_transposes_fp_and_fn(
            labels_a in proptest::collection::vec(0usize..5, 2..40),
            labels_b in proptest::collection::vec(0usize..5, 2..40),
        ) {
            let n = labels_a.len().min(labels_b.len());
            let a = partition(&labels_a[..n]);
            let b = partition(&labels_b[..n]);
            let ab = pair_counts(&a, &b).unwrap();
            let ba = pair_counts(&b, &a).unwrap();
            prop_assert_eq!(ab.true_positive, ba.true_positive);
            prop_assert_eq!(ab.true_negative, ba.true_negative);
            prop_assert_eq!(ab.false_positive, ba.false_negative);
            prop_assert_eq!(ab.false_negative, ba.false_positive);
            prop_assert_eq!(ab.total(), (n * (n - 1) / 2) as u64);
            // Rand is symmetric.
            prop_assert_eq!(rand_index(&ab).to_bits(), rand_index(&ba).to_bits());
        }

        #[test]
        fn relabeling_changes_nothing(
            labels in proptest::collection::vec(0usize..6, 2..40),
            perm_seed in 0usize..720,
        ) {
            // Apply a permutation of label values to the candidate.
            let mut mapping: Vec<usize> = (0..6).collect();
            let mut s = perm_seed;
            for i in (1..6).rev() {
                mapping.swap(i, s % (i + 1));
                s /= i + 1;
            }
            let relabeled: Vec<usize> = labels.iter().map(|&l| mapping[l]).collect();
            let a = partition(&labels);
            let b = partition(&relabeled);
            let c = pair_counts(&a, &b).unwrap();
            prop_assert_eq!(c.false_positive, 0);
            prop_assert_eq!(c.false_negative, 0);
        }
    }
}
