//! Thin indirection over rayon so every data-parallel loop in the crate has a
//! sequential twin. With the `parallel` feature (the default) these map over a
//! rayon pool; without it they are plain iterator loops producing byte-for-byte
//! identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Maps `f` over a slice, collecting results in input order.
#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over a slice, collecting results in input order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Sums `f(i)` over `0..n` using an exact integer accumulator, so the result
/// does not depend on reduction order.
#[cfg(feature = "parallel")]
pub(crate) fn sum_range<F>(n: usize, f: F) -> [u64; 4]
where
    F: Fn(usize) -> [u64; 4] + Sync + Send,
{
    (0..n).into_par_iter().map(f).reduce(|| [0u64; 4], add4)
}

/// Sums `f(i)` over `0..n` using an exact integer accumulator.
#[cfg(not(feature = "parallel"))]
pub(crate) fn sum_range<F>(n: usize, f: F) -> [u64; 4]
where
    F: Fn(usize) -> [u64; 4],
{
    (0..n).map(f).fold([0u64; 4], add4)
}

fn add4(a: [u64; 4], b: [u64; 4]) -> [u64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}
