//! Bisection inversion of monotone functions.

/// Stopping rule for [`invert_increasing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Stop once the bracket is at most this wide.
    pub width: f64,
    pub max_iter: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Self { width: 1e-13, max_iter: 200 }
    }
}

/// Finds `x ∈ [lo, hi]` with `f(x) = target` for a nondecreasing `f`.
///
/// Targets below `f(lo)` or above `f(hi)` return the corresponding endpoint.
pub fn invert_increasing<F>(f: F, target: f64, mut lo: f64, mut hi: f64, rule: Bisection) -> f64
where
    F: Fn(f64) -> f64,
{
    if target <= f(lo) {
        return lo;
    }
    if target >= f(hi) {
        return hi;
    }
    for _ in 0..rule.max_iter {
        if hi - lo <= rule.width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
