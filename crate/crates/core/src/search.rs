/// Largest `x` in `[lo, hi]` with `pred(x)`, for a predicate that holds at
/// `lo` and, once false, stays false. `pred(lo)` is never evaluated.
///
/// Probes midpoints (rounded up), so at most `ceil(log2(hi - lo + 1))` calls.
pub fn max_true<F>(lo: usize, hi: usize, mut pred: F) -> usize
where
    F: FnMut(usize) -> bool,
{
    let (mut lo, mut hi) = (lo, hi);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}
