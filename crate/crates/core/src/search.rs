//! One-dimensional searches on concave profiles.

use crate::error::{Error, Result};

pub(crate) const GOLDEN_MAX_ITER: usize = 200;
pub(crate) const BISECTION_MAX_ITER: usize = 200;
const WIDTH_REL: f64 = 1e-12;

/// Maximizes a concave `f` on `[lo, hi]` by golden-section search. Returns
/// the best argument and value seen.
pub(crate) fn golden_section_max<F>(mut f: F, lo: f64, hi: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    debug_assert!(lo <= hi);
    let stop = WIDTH_REL * (1.0 + (hi - lo));
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..GOLDEN_MAX_ITER {
        if b - a <= stop {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    // Endpoints matter when the maximum sits on the bracket edge.
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x)?;
        if fx > best.1 {
            best = (x, fx);
        }
    }
    Ok(best)
}

/// Given `pred(inside) == true` and `pred(outside) == false`, shrinks the
/// pair until they are within the relative width and returns the last
/// `inside` point.
pub(crate) fn bisect_edge<F>(mut pred: F, mut inside: f64, mut outside: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    let stop = WIDTH_REL * (1.0 + (inside - outside).abs());
    for _ in 0..BISECTION_MAX_ITER {
        if (inside - outside).abs() <= stop {
            return Ok(inside);
        }
        let mid = 0.5 * (inside + outside);
        if pred(mid)? {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Err(Error::ConvergenceFailure {
        what: "edge bisection",
        iterations: BISECTION_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_and_edge_maxima() {
        let (x, v) = golden_section_max(|x| Ok(-(x - 0.3) * (x - 0.3)), -2.0, 5.0).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
        assert!(v.abs() < 1e-12);

        let (x, _) = golden_section_max(Ok, 0.0, 1.0).unwrap();
        assert_eq!(x, 1.0);

        let (x, v) = golden_section_max(|x| Ok(-(x - 1.0).abs()), 1.0, 1.0).unwrap();
        assert_eq!((x, v), (1.0, 0.0));
    }

    #[test]
    fn bisection_locates_threshold() {
        let edge = bisect_edge(|x| Ok(x <= 0.25), 0.0, 1.0).unwrap();
        assert!((edge - 0.25).abs() < 1e-11 && edge <= 0.25);
    }
}
