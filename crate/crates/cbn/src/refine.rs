//! Neighborhood refinement by Betti-sequence similarity.
//!
//! A point keeps a neighbor only if the neighbor's Betti sequences stay
//! within a relative tolerance of its own, separately for `beta0` and
//! `beta1`. The surviving lists form a directed graph whose components are
//! the clusters.

use crate::error::{Error, Result};
use crate::graph::{ComponentMode, NeighborhoodGraph};
use crate::homology::BettiProfile;
use crate::knn::Neighborhood;
use crate::par;
use crate::stats::tukey_upper_whisker;

/// A tolerance that is either derived from the data or pinned by the caller.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum Tau {
    /// Upper whisker of the pooled relative changes (the data-driven
    /// default).
    #[default]
    Auto,
    /// Fixed value, `>= 0`; `+inf` disables pruning on that sequence.
    Fixed(f64),
}

/// Knobs of the clustering pipeline beyond the neighborhood size.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TuningParams {
    /// Tolerance on relative `beta0` change.
    pub tau0: Tau,
    /// Tolerance on relative `beta1` change.
    pub tau1: Tau,
    /// Component notion used to read clusters off the refined graph.
    pub mode: ComponentMode,
    /// When set, clusters smaller than this are dissolved and their points
    /// reassigned to the deepest surviving cluster.
    pub min_cluster_size: Option<usize>,
}

/// Relative Euclidean change from `reference` to `other`:
/// `|other - reference| / |reference|`.
///
/// Returns `Ok(None)` (undefined) when `reference` is the zero vector while
/// `other` is not; an undefined change fails every tolerance check, so such
/// neighbors are always pruned. When both vectors are zero the change is 0.
/// Errors when the lengths differ.
pub fn relative_change(reference: &[u32], other: &[u32]) -> Result<Option<f64>> {
    if reference.len() != other.len() {
        return Err(Error::ProfileLengthMismatch(reference.len(), other.len()));
    }
    let mut diff_sq = 0.0f64;
    let mut ref_sq = 0.0f64;
    for (&r, &o) in reference.iter().zip(other) {
        let (r, o) = (r as f64, o as f64);
        diff_sq += (o - r) * (o - r);
        ref_sq += r * r;
    }
    if ref_sq == 0.0 {
        return Ok(if diff_sq == 0.0 { Some(0.0) } else { None });
    }
    Ok(Some((diff_sq / ref_sq).sqrt()))
}

/// Pooled relative changes over all ordered center/neighbor pairs, collected
/// separately for `beta0` and `beta1`. Undefined changes are excluded from
/// the pools and only counted.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeChanges {
    pub beta0: Vec<f64>,
    pub beta1: Vec<f64>,
    pub undefined_beta0: usize,
    pub undefined_beta1: usize,
}

/// Collects the relative change of every neighbor against its neighborhood
/// center, over all ordered pairs `(i, j)` with `j` in the neighborhood of
/// `i` and `j != i`. `profiles[p]` must be the profile of point `p`.
pub fn pooled_relative_changes(
    neighborhoods: &[Neighborhood],
    profiles: &[BettiProfile],
) -> Result<RelativeChanges> {
    let mut out = RelativeChanges {
        beta0: Vec::new(),
        beta1: Vec::new(),
        undefined_beta0: 0,
        undefined_beta1: 0,
    };
    for nb in neighborhoods {
        let i = nb.center;
        debug_assert_eq!(profiles[i].owner, i);
        for &j in &nb.members {
            if j == i {
                continue;
            }
            match relative_change(&profiles[i].beta0, &profiles[j].beta0)? {
                Some(rc) => out.beta0.push(rc),
                None => out.undefined_beta0 += 1,
            }
            match relative_change(&profiles[i].beta1, &profiles[j].beta1)? {
                Some(rc) => out.beta1.push(rc),
                None => out.undefined_beta1 += 1,
            }
        }
    }
    Ok(out)
}

/// Data-driven tolerance for one pooled change sample: the upper whisker of
/// its Tukey box plot, i.e. the largest change not exceeding
/// `Q3 + 1.5 * IQR`. Errors when the pool is empty.
pub fn default_tau(changes: &[f64]) -> Result<f64> {
    if changes.is_empty() {
        return Err(Error::NoFiniteChanges);
    }
    let mut sorted = changes.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(tukey_upper_whisker(&sorted))
}

/// Both default tolerances at once, from the pooled relative changes of the
/// given neighborhoods and profiles.
pub fn default_taus(
    neighborhoods: &[Neighborhood],
    profiles: &[BettiProfile],
) -> Result<(f64, f64)> {
    let changes = pooled_relative_changes(neighborhoods, profiles)?;
    Ok((default_tau(&changes.beta0)?, default_tau(&changes.beta1)?))
}

fn validate_tau(name: &'static str, value: f64) -> Result<f64> {
    if value.is_nan() || value < 0.0 {
        return Err(Error::InvalidTau { name, value });
    }
    Ok(value)
}

/// Prunes each neighborhood to the members whose Betti sequences lie within
/// the tolerances of the center's, the center always surviving. Tolerances
/// must already be resolved to numbers (see [`default_taus`]); `+inf` keeps
/// every neighbor with a defined change.
pub fn refine_neighborhoods(
    neighborhoods: &[Neighborhood],
    profiles: &[BettiProfile],
    tau0: f64,
    tau1: f64,
) -> Result<NeighborhoodGraph> {
    let tau0 = validate_tau("tau0", tau0)?;
    let tau1 = validate_tau("tau1", tau1)?;
    let lists: Vec<Result<Vec<usize>>> = par::map_slice(neighborhoods, |nb| {
        let i = nb.center;
        let mut kept = Vec::with_capacity(nb.members.len());
        for &j in &nb.members {
            if j == i {
                kept.push(j);
                continue;
            }
            let rc0 = relative_change(&profiles[i].beta0, &profiles[j].beta0)?;
            let rc1 = relative_change(&profiles[i].beta1, &profiles[j].beta1)?;
            if let (Some(rc0), Some(rc1)) = (rc0, rc1) {
                if rc0 <= tau0 && rc1 <= tau1 {
                    kept.push(j);
                }
            }
        }
        Ok(kept)
    });
    let out: Result<Vec<Vec<usize>>> = lists.into_iter().collect();
    NeighborhoodGraph::from_out_neighbors(out?)
}
