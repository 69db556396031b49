//! Agglomerative clustering via the nearest-neighbor chain algorithm.

use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::union_find::UnionFind;

/// How the distance between two merged clusters is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    /// Closest pair across the clusters.
    Single,
    /// Farthest pair across the clusters.
    Complete,
    /// Size-weighted mean of pairwise distances.
    Average,
}

/// One agglomeration step: the clusters containing points `a` and `b` merged
/// at `height`, producing a cluster of `size` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

/// The full merge history of an agglomerative run, sorted by nondecreasing
/// height (ties keep the order in which the chain found them).
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

/// Where to cut a dendrogram into a flat partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cut {
    /// Apply every merge of height strictly below the value.
    Height(f64),
    /// Stop when exactly this many clusters remain.
    Count(usize),
    /// Cut inside the widest gap between consecutive merge heights. The
    /// default when no cut is given.
    MaxGap,
}

/// An agglomerative clustering cut into a flat partition.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalResult {
    pub partition: Partition,
    pub dendrogram: Dendrogram,
}

/// Builds the dendrogram under the given linkage and cuts it.
pub fn hierarchical(
    matrix: &DistanceMatrix,
    linkage: Linkage,
    cut: Cut,
) -> Result<HierarchicalResult> {
    let dendrogram = dendrogram(matrix, linkage)?;
    let partition = match cut {
        Cut::Height(h) => dendrogram.cut_height(h)?,
        Cut::Count(c) => dendrogram.cut_count(c)?,
        Cut::MaxGap => dendrogram.max_gap_cut()?,
    };
    Ok(HierarchicalResult {
        partition,
        dendrogram,
    })
}

/// Runs the nearest-neighbor chain to produce all `n - 1` merges.
///
/// The chain walks nearest neighbors (ties to the smaller index) until two
/// clusters are mutually nearest, merges them, and continues; cluster
/// distances are updated by the linkage's recurrence. Heights are sorted
/// afterwards, which for these linkages only reorders merges of independent
/// cluster pairs.
pub fn dendrogram(matrix: &DistanceMatrix, linkage: Linkage) -> Result<Dendrogram> {
    let n = matrix.n();
    // Working copy of cluster distances; slot i holds the cluster whose
    // lowest-index point is i.
    let mut d = matrix.clone();
    let mut active: Vec<bool> = vec![true; n];
    let mut size: Vec<usize> = vec![1; n];
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    let mut raw: Vec<(usize, usize, f64)> = Vec::with_capacity(n.saturating_sub(1));

    while raw.len() + 1 < n {
        if chain.is_empty() {
            let start = active.iter().position(|&a| a).expect("clusters remain");
            chain.push(start);
        }
        loop {
            let a = *chain.last().unwrap();
            let mut nearest = usize::MAX;
            let mut best = f64::INFINITY;
            for (j, &alive) in active.iter().enumerate() {
                if j != a && alive && d.get(a, j) < best {
                    best = d.get(a, j);
                    nearest = j;
                }
            }
            if chain.len() >= 2 && nearest == chain[chain.len() - 2] {
                break;
            }
            // The previous chain element reached `a` as its nearest
            // neighbor, so when it ties `a`'s own minimum the two clusters
            // are already mutually nearest; merging them (rather than
            // walking to an equally distant smaller index) keeps the chain
            // from cycling through tied distances.
            if chain.len() >= 2 && d.get(a, chain[chain.len() - 2]) == best {
                break;
            }
            chain.push(nearest);
        }
        let b = chain.pop().unwrap();
        let a = chain.pop().unwrap();
        let (keep, drop) = (a.min(b), a.max(b));
        let height = d.get(a, b);
        raw.push((keep, drop, height));

        let (sa, sb) = (size[keep], size[drop]);
        for (j, &alive) in active.iter().enumerate() {
            if !alive || j == keep || j == drop {
                continue;
            }
            let dk = d.get(keep, j);
            let dd = d.get(drop, j);
            let merged = match linkage {
                Linkage::Single => dk.min(dd),
                Linkage::Complete => dk.max(dd),
                Linkage::Average => (sa as f64 * dk + sb as f64 * dd) / (sa + sb) as f64,
            };
            d.set(keep, j, merged);
            d.set(j, keep, merged);
        }
        active[drop] = false;
        size[keep] = sa + sb;
    }

    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&x, &y| raw[x].2.partial_cmp(&raw[y].2).unwrap());
    let mut sorted_sizes = vec![1usize; n];
    let mut uf = UnionFind::new(n);
    let merges = order
        .into_iter()
        .map(|idx| {
            let (a, b, height) = raw[idx];
            let (ra, rb) = (uf.find(a as u32) as usize, uf.find(b as u32) as usize);
            let size = sorted_sizes[ra] + sorted_sizes[rb];
            uf.union(a as u32, b as u32);
            sorted_sizes[uf.find(a as u32) as usize] = size;
            Merge { a, b, height, size }
        })
        .collect();
    Ok(Dendrogram { n, merges })
}

impl Dendrogram {
    /// Number of points.
    pub fn n(&self) -> usize {
        self.n
    }

    /// All merges, sorted by nondecreasing height.
    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    fn partition_after(&self, applied: usize) -> Result<Partition> {
        let mut uf = UnionFind::new(self.n);
        for m in &self.merges[..applied] {
            uf.union(m.a as u32, m.b as u32);
        }
        let raw: Vec<usize> = (0..self.n).map(|i| uf.find(i as u32) as usize).collect();
        Partition::canonicalize(&raw)
    }

    /// Applies every merge of height strictly less than `h`. For single
    /// linkage this is exactly the connected components of the graph with
    /// edges shorter than `h`.
    pub fn cut_height(&self, h: f64) -> Result<Partition> {
        if h.is_nan() {
            return Err(Error::param("cut height", "must not be NaN"));
        }
        let applied = self.merges.partition_point(|m| m.height < h);
        self.partition_after(applied)
    }

    /// Stops merging when exactly `count` clusters remain.
    pub fn cut_count(&self, count: usize) -> Result<Partition> {
        if count < 1 || count > self.n {
            return Err(Error::InvalidClusterCount { count, n: self.n });
        }
        self.partition_after(self.n - count)
    }

    /// Cuts inside the widest gap between consecutive merge heights (the
    /// widest gap wins; equally wide gaps resolve to the lowest, keeping more
    /// clusters). Degenerate dendrograms with fewer than two merges collapse
    /// to a single cluster.
    pub fn max_gap_cut(&self) -> Result<Partition> {
        if self.merges.len() < 2 {
            return self.partition_after(self.merges.len());
        }
        let mut best_gap = f64::NEG_INFINITY;
        let mut applied = self.merges.len();
        for i in 0..self.merges.len() - 1 {
            let gap = self.merges[i + 1].height - self.merges[i].height;
            if gap > best_gap {
                best_gap = gap;
                applied = i + 1;
            }
        }
        self.partition_after(applied)
    }
}
