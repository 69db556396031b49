//! Betti sequences of Vietoris-Rips filtrations in dimensions 0 and 1.
//!
//! For a weighted point set, sweeping a threshold `eps` across a fixed grid
//! activates every edge of weight `<= eps`. At each grid value the complex is
//! the flag complex of the active graph, for which only two numbers are
//! tracked: `beta0`, the count of connected components, and `beta1`, the
//! number of independent cycles of the active graph (its cycle rank
//! `E - V + beta0`). Higher-dimensional structure is deliberately ignored;
//! on neighborhoods of a few dozen points these two sequences already
//! separate shapes well and cost only a sorted edge sweep.

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::knn::Neighborhood;
use crate::par;
use crate::stats::quantile_type7;
use crate::union_find::UnionFind;

/// Strictly increasing thresholds in `[0, 1]` at which Betti numbers are
/// sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdGrid {
    thresholds: Vec<f64>,
}

impl ThresholdGrid {
    /// Wraps an explicit threshold list. Rejects lists that are shorter than
    /// two, not strictly increasing, or not contained in `[0, 1]`.
    pub fn new(thresholds: Vec<f64>) -> Result<Self> {
        if thresholds.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 thresholds, got {}",
                thresholds.len()
            )));
        }
        for w in thresholds.windows(2) {
            if w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less) {
                return Err(Error::InvalidGrid(format!(
                    "thresholds must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let (first, last) = (thresholds[0], *thresholds.last().unwrap());
        if !first.is_finite() || first < 0.0 || last > 1.0 {
            return Err(Error::InvalidGrid(format!(
                "thresholds must lie in [0, 1], got range [{first}, {last}]"
            )));
        }
        Ok(ThresholdGrid { thresholds })
    }

    /// `l` evenly spaced thresholds `0, 1/l, 2/l, ..., (l-1)/l`.
    pub fn uniform(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidGrid(format!(
                "uniform grid needs at least 2 steps, got {l}"
            )));
        }
        Self::new((0..l).map(|j| j as f64 / l as f64).collect())
    }

    /// The 100-step grid `0.00, 0.01, ..., 0.99` used by default throughout
    /// the crate.
    pub fn default_grid() -> Self {
        Self::uniform(100).expect("100-step grid is valid")
    }

    /// Number of thresholds.
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    /// Never true: grids have at least two thresholds.
    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// The thresholds, ascending.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }
}

impl Default for ThresholdGrid {
    fn default() -> Self {
        Self::default_grid()
    }
}

/// Betti numbers of one point's neighborhood filtration, sampled along a
/// threshold grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BettiProfile {
    /// Index of the point whose neighborhood was filtered.
    pub owner: usize,
    /// Connected-component counts per threshold. Nonincreasing, starts at the
    /// neighborhood size when nothing is connected at the first threshold,
    /// and never drops below 1.
    pub beta0: Vec<u32>,
    /// Cycle ranks per threshold. Nondecreasing for a fixed vertex set.
    pub beta1: Vec<u32>,
}

impl BettiProfile {
    /// Number of grid samples.
    pub fn len(&self) -> usize {
        self.beta0.len()
    }

    /// True only for a profile constructed by hand with no samples.
    pub fn is_empty(&self) -> bool {
        self.beta0.is_empty()
    }
}

/// Computes the Betti sequences of one neighborhood's filtration.
///
/// Edges are the neighborhood's member pairs weighted by `matrix` (pass the
/// transformed matrix to sweep a `[0, 1]` grid). An edge is active at
/// threshold `eps` when its weight is `<= eps`. The sweep inserts edges in
/// ascending weight order, maintaining components with a disjoint-set forest
/// and the cycle rank through `beta1 = E - V + beta0`.
pub fn betti_sequences(
    neighborhood: &Neighborhood,
    matrix: &DistanceMatrix,
    grid: &ThresholdGrid,
) -> BettiProfile {
    let members = &neighborhood.members;
    let k = members.len() as u32;
    let mut edges: Vec<(f64, u32, u32)> =
        Vec::with_capacity(members.len() * (members.len() - 1) / 2);
    for a in 0..members.len() {
        for b in (a + 1)..members.len() {
            edges.push((matrix.get(members[a], members[b]), a as u32, b as u32));
        }
    }
    edges.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());

    let mut uf = UnionFind::new(members.len());
    let mut beta0 = Vec::with_capacity(grid.len());
    let mut beta1 = Vec::with_capacity(grid.len());
    let mut next = 0usize;
    let mut active: u32 = 0;
    for &eps in grid.thresholds() {
        while next < edges.len() && edges[next].0 <= eps {
            let (_, a, b) = edges[next];
            uf.union(a, b);
            active += 1;
            next += 1;
        }
        let b0 = uf.components();
        beta0.push(b0);
        beta1.push(active + b0 - k);
    }
    BettiProfile {
        owner: neighborhood.center,
        beta0,
        beta1,
    }
}

/// Betti profiles for every neighborhood, in input order. Runs neighborhoods
/// in parallel when the `parallel` feature is enabled.
pub fn betti_profiles(
    neighborhoods: &[Neighborhood],
    matrix: &DistanceMatrix,
    grid: &ThresholdGrid,
) -> Vec<BettiProfile> {
    par::map_slice(neighborhoods, |nb| betti_sequences(nb, matrix, grid))
}

/// Sequential twin of [`betti_profiles`], available regardless of features.
pub fn betti_profiles_seq(
    neighborhoods: &[Neighborhood],
    matrix: &DistanceMatrix,
    grid: &ThresholdGrid,
) -> Vec<BettiProfile> {
    neighborhoods
        .iter()
        .map(|nb| betti_sequences(nb, matrix, grid))
        .collect()
}

/// Five-number summary (minimum, lower quartile, median, upper quartile,
/// maximum) of one Betti number across profiles at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveNum {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

fn five_num(sorted: &[f64]) -> FiveNum {
    FiveNum {
        min: sorted[0],
        q1: quantile_type7(sorted, 0.25),
        median: quantile_type7(sorted, 0.5),
        q3: quantile_type7(sorted, 0.75),
        max: sorted[sorted.len() - 1],
    }
}

/// Per-threshold five-number summaries of `beta0` and `beta1` across a set of
/// profiles: a compact picture of how connectivity dissolves and cycles
/// accumulate as the threshold grows.
#[derive(Debug, Clone, PartialEq)]
pub struct BettiSummary {
    pub beta0: Vec<FiveNum>,
    pub beta1: Vec<FiveNum>,
}

/// Summarizes Betti dynamics across profiles, which must all be sampled on
/// grids of the same length.
pub fn betti_dynamics_summary(profiles: &[BettiProfile]) -> Result<BettiSummary> {
    let first = profiles.first().ok_or(Error::EmptyProfiles)?;
    let len = first.len();
    for p in profiles {
        if p.len() != len {
            return Err(Error::MixedGridLengths(len, p.len()));
        }
        if p.beta1.len() != p.beta0.len() {
            return Err(Error::ProfileLengthMismatch(p.beta0.len(), p.beta1.len()));
        }
    }
    let mut beta0 = Vec::with_capacity(len);
    let mut beta1 = Vec::with_capacity(len);
    let mut buf = Vec::with_capacity(profiles.len());
    for j in 0..len {
        for seq in [0, 1] {
            buf.clear();
            buf.extend(
                profiles
                    .iter()
                    .map(|p| (if seq == 0 { p.beta0[j] } else { p.beta1[j] }) as f64),
            );
            buf.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            if seq == 0 {
                beta0.push(five_num(&buf));
            } else {
                beta1.push(five_num(&buf));
            }
        }
    }
    Ok(BettiSummary { beta0, beta1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn neighborhood_and_matrix(weights: Vec<Vec<f64>>) -> (Neighborhood, DistanceMatrix) {
        let k = weights.len();
        let matrix = DistanceMatrix::from_rows(weights).unwrap();
        let members: Vec<usize> = (0..k).collect();
        let mut pair_distances = Vec::new();
        for a in 0..k {
            for b in (a + 1)..k {
                pair_distances.push(matrix.get(a, b));
            }
        }
        (
            Neighborhood {
                center: 0,
                members,
                pair_distances,
            },
            matrix,
        )
    }

    /// Square with one diagonal much shorter than the other: the four sides
    /// close into a cycle at 0.4, the short diagonal splits it into two
    /// triangles' worth of cycles at 0.55, the long diagonal adds one more.
    fn square() -> (Neighborhood, DistanceMatrix) {
        neighborhood_and_matrix(vec![
            vec![0.0, 0.3, 0.55, 0.4],
            vec![0.3, 0.0, 0.35, 0.9],
            vec![0.55, 0.35, 0.0, 0.4],
            vec![0.4, 0.9, 0.4, 0.0],
        ])
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        assert!(ThresholdGrid::new(vec![0.5]).is_err());
        assert!(ThresholdGrid::new(vec![0.1, 0.1]).is_err());
        assert!(ThresholdGrid::new(vec![0.2, 0.1]).is_err());
        assert!(ThresholdGrid::new(vec![-0.1, 0.5]).is_err());
        assert!(ThresholdGrid::new(vec![0.5, 1.1]).is_err());
        assert!(ThresholdGrid::uniform(1).is_err());
    }

    #[test]
    fn default_grid_is_the_hundredth_steps() {
        let g = ThresholdGrid::default_grid();
        assert_eq!(g.len(), 100);
        assert_eq!(g.thresholds()[0], 0.0);
        assert_eq!(g.thresholds()[1], 0.01);
        assert_eq!(g.thresholds()[99], 0.99);
    }

    #[test]
    fn square_betti_sequences_match_hand_computation() {
        let (nb, m) = square();
        let grid = ThresholdGrid::new(vec![0.0, 0.3, 0.35, 0.4, 0.55, 0.9]).unwrap();
        let p = betti_sequences(&nb, &m, &grid);
        // eps 0.0: four isolated vertices.
        // eps 0.3: edge 01.
        // eps 0.35: edges 01, 12.
        // eps 0.4: edges 01, 12, 23, 03 close the square.
        // eps 0.55: diagonal 02 splits it.
        // eps 0.9: diagonal 13 completes K4.
        assert_eq!(p.beta0, vec![4, 3, 2, 1, 1, 1]);
        assert_eq!(p.beta1, vec![0, 0, 0, 1, 2, 3]);
    }

    #[test]
    fn edge_weight_equal_to_threshold_is_active() {
        let (nb, m) = neighborhood_and_matrix(vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        let grid = ThresholdGrid::new(vec![0.49, 0.5]).unwrap();
        let p = betti_sequences(&nb, &m, &grid);
        assert_eq!(p.beta0, vec![2, 1]);
    }

    #[test]
    fn singleton_neighborhood_is_one_component_no_cycles() {
        let nb = Neighborhood {
            center: 3,
            members: vec![3],
            pair_distances: vec![],
        };
        let m =
            DistanceMatrix::from_rows(vec![vec![0.0; 4], vec![0.0; 4], vec![0.0; 4], vec![0.0; 4]])
                .unwrap();
        let grid = ThresholdGrid::default_grid();
        let p = betti_sequences(&nb, &m, &grid);
        assert!(p.beta0.iter().all(|&b| b == 1));
        assert!(p.beta1.iter().all(|&b| b == 0));
        assert_eq!(p.owner, 3);
    }

    #[test]
    fn summary_flags_mixed_grid_lengths() {
        let a = BettiProfile {
            owner: 0,
            beta0: vec![2, 1],
            beta1: vec![0, 1],
        };
        let b = BettiProfile {
            owner: 1,
            beta0: vec![2, 1, 1],
            beta1: vec![0, 0, 1],
        };
        assert!(matches!(
            betti_dynamics_summary(&[a, b]),
            Err(Error::MixedGridLengths(2, 3))
        ));
        assert!(matches!(
            betti_dynamics_summary(&[]),
            Err(Error::EmptyProfiles)
        ));
    }

    #[test]
    fn summary_matches_hand_quartiles() {
        let profiles: Vec<BettiProfile> = [1u32, 2, 3, 4]
            .iter()
            .map(|&b| BettiProfile {
                owner: b as usize,
                beta0: vec![b],
                beta1: vec![b * 10],
            })
            .collect();
        let s = betti_dynamics_summary(&profiles).unwrap();
        assert_eq!(s.beta0[0].min, 1.0);
        assert_eq!(s.beta0[0].q1, 1.75);
        assert_eq!(s.beta0[0].median, 2.5);
        assert_eq!(s.beta0[0].q3, 3.25);
        assert_eq!(s.beta0[0].max, 4.0);
        assert_eq!(s.beta1[0].median, 25.0);
    }

    /// Random symmetric weight matrices in [0, 1].
    fn random_weights(k: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
        proptest::collection::vec(0.01f64..=1.0, k * (k - 1) / 2).prop_map(move |w| {
            let index = |a: usize, b: usize| a * k - a * (a + 1) / 2 + (b - a - 1);
            (0..k)
                .map(|a| {
                    (0..k)
                        .map(|b| match a.cmp(&b) {
                            std::cmp::Ordering::Equal => 0.0,
                            std::cmp::Ordering::Less => w[index(a, b)],
                            std::cmp::Ordering::Greater => w[index(b, a)],
                        })
                        .collect()
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn monotone_euler_and_step_accounting_hold(rows in (2usize..9).prop_flat_map(random_weights)) {
            let k = rows.len() as i64;
            let (nb, m) = neighborhood_and_matrix(rows);
            let grid = ThresholdGrid::uniform(50).unwrap();
            let p = betti_sequences(&nb, &m, &grid);

            prop_assert_eq!(p.beta0[0] as i64, k);
            prop_assert!(*p.beta0.last().unwrap() >= 1);
            for j in 1..p.len() {
                // Components only merge, cycles only accumulate.
                prop_assert!(p.beta0[j] <= p.beta0[j - 1]);
                prop_assert!(p.beta1[j] >= p.beta1[j - 1]);
                // Each inserted edge either merges two components or closes
                // a cycle, never both.
                let drop0 = (p.beta0[j - 1] - p.beta0[j]) as i64;
                let gain1 = (p.beta1[j] - p.beta1[j - 1]) as i64;
                let eps = grid.thresholds()[j];
                let prev = grid.thresholds()[j - 1];
                let inserted = nb
                    .pair_distances
                    .iter()
                    .filter(|d| **d > prev && **d <= eps)
                    .count() as i64;
                prop_assert_eq!(drop0 + gain1, inserted);
            }
            // Euler relation at every threshold.
            for j in 0..p.len() {
                let eps = grid.thresholds()[j];
                let e = nb.pair_distances.iter().filter(|d| **d <= eps).count() as i64;
                prop_assert_eq!(p.beta1[j] as i64 - p.beta0[j] as i64, e - k);
            }
        }
    }
}
