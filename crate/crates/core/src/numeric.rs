//! Small numeric helpers: bracketed bisection for monotone maps.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` for a function with `f(lo) <= 0 < f(hi)`.
///
/// Returns the final bracket `(lo, hi)` with `hi - lo <= tol`, keeping the
/// invariant `f(lo) <= 0 < f(hi)`. The function only needs to change sign
/// once; it does not have to be continuous.
pub fn bisect_bracket<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::domain(format!(
            "bisection needs lo < hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo <= 0.0 && fhi > 0.0) {
        return Err(Error::Internal(format!(
            "root not bracketed: f({lo}) = {flo}, f({hi}) = {fhi}"
        )));
    }
    // 2000 halvings exhaust any f64 interval
    for _ in 0..2000 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// Root of an increasing function with a sign change on `[lo, hi]`, to `tol`.
pub fn bisect_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (a, b) = bisect_bracket(f, lo, hi, tol)?;
    Ok(0.5 * (a + b))
}
