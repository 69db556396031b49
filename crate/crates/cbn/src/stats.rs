//! Small order-statistics helpers shared across modules.

/// Quantile of a sorted sample by linear interpolation between order
/// statistics at position `1 + (n - 1) * p` (the convention NumPy and R call
/// type 7). `sorted` must be nonempty and ascending; `p` in `[0, 1]`.
pub(crate) fn quantile_type7(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&p));
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if frac == 0.0 || lo + 1 == sorted.len() {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Upper whisker of a Tukey box plot: the largest sample value that does not
/// exceed `Q3 + 1.5 * IQR`. Falls back to the sample maximum when every value
/// sits above that fence (possible only for degenerate samples). `sorted`
/// must be nonempty and ascending.
pub(crate) fn tukey_upper_whisker(sorted: &[f64]) -> f64 {
    debug_assert!(!sorted.is_empty());
    let q1 = quantile_type7(sorted, 0.25);
    let q3 = quantile_type7(sorted, 0.75);
    let fence = q3 + 1.5 * (q3 - q1);
    let inside = sorted.partition_point(|v| *v <= fence);
    if inside == 0 {
        sorted[sorted.len() - 1]
    } else {
        sorted[inside - 1]
    }
}
