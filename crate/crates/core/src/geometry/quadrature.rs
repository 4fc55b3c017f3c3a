//! One-dimensional Gauss–Legendre rules, generic over the scalar type.

use crate::scalar::Real;

/// Evaluates the Legendre polynomial `P_n` and its derivative at `x`.
fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    if n == 0 {
        return (p0, T::zero());
    }
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::c(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes in ascending order.
///
/// The rule integrates polynomials of degree `2n − 1` exactly. Nodes are
/// symmetric about the origin and the origin is a node only when `n` is odd.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_usize_lossy(n);
    let tol = T::epsilon() * T::c(4.0);
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (T::PI() * (T::from_usize_lossy(i) + T::c(0.75)) / (nf + T::c(0.5))).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x = x - dx;
            if dx.abs() <= tol {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = T::c(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on<T: Real>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre::<T>(n);
    let half = (b - a) / T::c(2.0);
    let mid = (a + b) / T::c(2.0);
    (
        x.into_iter().map(|xi| mid + half * xi).collect(),
        w.into_iter().map(|wi| wi * half).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_monomials_exactly() {
        for n in 1..14 {
            let (x, w) = gauss_legendre::<f64>(n);
            for deg in 0..(2 * n) {
                let num: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((num - exact).abs() < 1e-13, "n={n} deg={deg}: {num} vs {exact}");
            }
        }
    }

    #[test]
    fn symmetric_and_sorted() {
        let (x, w) = gauss_legendre::<f64>(10);
        for i in 0..10 {
            assert_eq!(x[i], -x[9 - i]);
            assert_eq!(w[i], w[9 - i]);
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn mapped_interval() {
        let (x, w) = gauss_legendre_on::<f64>(5, 0.0, 1.0);
        let s: f64 = x.iter().zip(&w).map(|(a, b)| b * a * a * a).sum();
        assert!((s - 0.25).abs() < 1e-14);
    }

    #[test]
    fn single_precision_instantiates() {
        let (_, w) = gauss_legendre::<f32>(6);
        let s: f32 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-5);
    }
}
