//! Scalar root bracketing shared by the solvers.

/// Bisection on a strictly decreasing `f` over `[lo, hi]` with `f(lo) > 0 > f(hi)`.
///
/// Stops once `narrow(lo, hi)` holds or the midpoint no longer splits the
/// bracket (floating-point resolution). Returns the midpoint of the final
/// bracket and the number of halvings, or `None` if `max_iter` was exhausted.
pub(crate) fn bisect_decreasing(
    mut f: impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    narrow: impl Fn(f64, f64) -> bool,
    max_iter: usize,
) -> Option<(f64, usize)> {
    for it in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if narrow(lo, hi) || mid <= lo || mid >= hi {
            return Some((mid, it));
        }
        let v = f(mid);
        if v > 0.0 {
            lo = mid;
        } else if v < 0.0 {
            hi = mid;
        } else {
            return Some((mid, it));
        }
    }
    None
}

/// Outcome of [`bisect_decreasing_log`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogBisection {
    /// Point with the smallest `|f|` seen.
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
    /// Final bracket, `f(lo) >= 0 >= f(hi)` as far as evaluated.
    pub lo: f64,
    pub hi: f64,
}

/// Geometric bisection for a strictly decreasing, fallible `f` over positive
/// `[lo, hi]` with `f(lo) > 0 > f(hi)`.
///
/// `done(f(x))` lets the caller stop on a residual criterion; the search also
/// stops when the bracket collapses to adjacent floats.
pub(crate) fn bisect_decreasing_log<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    mut lo: f64,
    mut hi: f64,
    done: impl Fn(f64) -> bool,
    max_iter: usize,
) -> Result<LogBisection, E> {
    let mut best: Option<(f64, f64)> = None;
    let mut evaluations = max_iter;
    for it in 0..max_iter {
        let mut mid = libm::sqrt(lo * hi);
        if mid <= lo || mid >= hi {
            mid = 0.5 * (lo + hi);
        }
        if mid <= lo || mid >= hi {
            evaluations = it;
            break;
        }
        let v = f(mid)?;
        if best.is_none_or(|(_, b)| libm::fabs(v) < libm::fabs(b)) {
            best = Some((mid, v));
        }
        if done(v) {
            return Ok(LogBisection { x: mid, fx: v, evaluations: it + 1, lo: mid, hi: mid });
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (x, fx) = match best {
        Some(b) => b,
        None => (lo, f(lo)?),
    };
    Ok(LogBisection { x, fx, evaluations, lo, hi })
}

/// Blends two rate vectors so their sum hits `target`.
///
/// Used when a price bracket has collapsed to adjacent floats but aggregate
/// demand still jumps across the target: below a sigmoid's inflection the
/// log-marginal is flat to machine precision, so demand is effectively
/// discontinuous in price. Every blended rate lies between its two endpoint
/// demands and so satisfies stationarity at either bracket price.
pub(crate) fn blend_to_total(at_lo: &[f64], at_hi: &[f64], target: f64) -> alloc::vec::Vec<f64> {
    let s_lo: f64 = at_lo.iter().sum();
    let s_hi: f64 = at_hi.iter().sum();
    let theta = if s_lo == s_hi { 0.0 } else { ((s_lo - target) / (s_lo - s_hi)).clamp(0.0, 1.0) };
    at_lo.iter().zip(at_hi).map(|(a, b)| a + theta * (b - a)).collect()
}
