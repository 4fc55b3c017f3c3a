//! Golden-section search for a unimodal function on an interval.

use crate::error::Result;
use crate::scalar::Real;

/// Shrinks `[a, b]` to width `width`. Returns every evaluated `(x, f(x))`
/// in order, and the final bracket.
pub fn golden_section<T: Real, F>(mut f: F, a: T, b: T, width: T) -> Result<(Vec<(T, T)>, (T, T))>
where
    F: FnMut(T) -> Result<T>,
{
    let inv_phi = (T::c(5.0).sqrt() - T::one()) / T::c(2.0);
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut evals = vec![(x1, f1), (x2, f2)];
    while hi - lo > width {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
            evals.push((x1, f1));
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
            evals.push((x2, f2));
        }
    }
    Ok((evals, (lo, hi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let (evals, (lo, hi)) = golden_section(|x: f64| Ok((x - 0.3).powi(2)), -1.0, 2.0, 1e-6).unwrap();
        assert!(hi - lo <= 1e-6);
        assert!(lo <= 0.3 && 0.3 <= hi);
        assert!(evals.len() < 40);
    }
}
