//! Directed neighborhood graphs and their component partitions.

use crate::error::{Error, Result};
use crate::knn::Neighborhood;
use crate::partition::Partition;
use crate::union_find::UnionFind;

/// Whether clusters are strongly connected components of the directed
/// neighborhood graph or components of its undirected closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComponentMode {
    /// Mutual reachability. The default: one-way attractions (a point kept by
    /// a cluster it does not keep back) do not glue clusters together.
    #[default]
    Strong,
    /// Any-direction reachability.
    Weak,
}

/// Directed graph with one sorted out-neighbor list per point. Every point
/// keeps itself, so out-degrees are at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodGraph {
    out: Vec<Vec<usize>>,
}

impl NeighborhoodGraph {
    /// Wraps out-neighbor lists, sorting and deduplicating each. Rejects
    /// out-of-range targets and lists missing the self-loop.
    pub fn from_out_neighbors(mut out: Vec<Vec<usize>>) -> Result<Self> {
        let n = out.len();
        if n == 0 {
            return Err(Error::param("neighborhood graph", "no nodes"));
        }
        for (i, targets) in out.iter_mut().enumerate() {
            targets.sort_unstable();
            targets.dedup();
            if targets.iter().any(|&t| t >= n) {
                return Err(Error::param(
                    "neighborhood graph",
                    format!("node {i} points outside 0..{n}"),
                ));
            }
            if targets.binary_search(&i).is_err() {
                return Err(Error::param(
                    "neighborhood graph",
                    format!("node {i} is missing its self-loop"),
                ));
            }
        }
        Ok(NeighborhoodGraph { out })
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.out.len()
    }

    /// Sorted out-neighbors of `i` (including `i`).
    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    /// True when the edge `i -> j` is present.
    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        self.out[i].binary_search(&j).is_ok()
    }

    /// Total directed edge count, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }
}

/// The unrefined graph: every point keeps its whole neighborhood. Useful as
/// an ablation baseline for the refinement step.
pub fn knn_digraph(neighborhoods: &[Neighborhood]) -> Result<NeighborhoodGraph> {
    NeighborhoodGraph::from_out_neighbors(
        neighborhoods.iter().map(|nb| nb.members.clone()).collect(),
    )
}

/// Clusters are the chosen components of the graph, labeled by first
/// occurrence in point order.
pub fn extract_clusters(graph: &NeighborhoodGraph, mode: ComponentMode) -> Partition {
    let raw = match mode {
        ComponentMode::Strong => tarjan_scc(graph),
        ComponentMode::Weak => weak_components(graph),
    };
    Partition::canonicalize(&raw).expect("graphs are nonempty")
}

/// Iterative Tarjan strongly-connected components; returns an arbitrary
/// component id per node.
fn tarjan_scc(graph: &NeighborhoodGraph) -> Vec<usize> {
    let n = graph.n();
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comp_count = 0usize;
    // Work items: (node, position in its out-list).
    let mut work: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        work.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if *pos == 0 {
                index[v] = next_index;
                lowlink[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let targets = graph.out_neighbors(v);
            if *pos < targets.len() {
                let w = targets[*pos];
                *pos += 1;
                if index[w] == UNSET {
                    work.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    comp
}

fn weak_components(graph: &NeighborhoodGraph) -> Vec<usize> {
    let n = graph.n();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for &j in graph.out_neighbors(i) {
            uf.union(i as u32, j as u32);
        }
    }
    (0..n).map(|i| uf.find(i as u32) as usize).collect()
}
