//! Gegenbauer polynomials and homogeneous harmonic polynomials on ℝ⁴.

use crate::scalar::Real;

/// `C_n^{(λ)}(x)` for `n = 0..=max`.
pub fn gegenbauer_all<T: Real>(max: usize, lambda: T, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(T::one());
    if max == 0 {
        return out;
    }
    out.push(T::c(2.0) * lambda * x);
    for n in 2..=max {
        let nf = T::from_usize_lossy(n);
        let v = (T::c(2.0) * x * (nf + lambda - T::one()) * out[n - 1]
            - (nf + T::c(2.0) * lambda - T::c(2.0)) * out[n - 2])
            / nf;
        out.push(v);
    }
    out
}

/// Label of a raw degree-`l` harmonic on ℝ⁴ in Hopf form,
/// `Re/Im(z₁^a) · Re/Im(z₂^b) · P̃_n^{(b,a)}(|z₁|²−|z₂|², |z₁|²+|z₂|²)`
/// with `z₁ = x₁ + i x₂`, `z₂ = x₃ + i x₄` and `l = a + b + 2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HopfLabel {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    /// `false` selects `Re(z₁^a)`, `true` selects `Im(z₁^a)`.
    pub sin1: bool,
    pub sin2: bool,
}

/// All raw harmonics of degree `l`; there are `(l+1)²` of them.
pub fn hopf_labels(l: usize) -> Vec<HopfLabel> {
    let mut out = Vec::with_capacity((l + 1) * (l + 1));
    for n in 0..=l / 2 {
        let rest = l - 2 * n;
        for a in 0..=rest {
            let b = rest - a;
            for sin1 in [false, true] {
                if sin1 && a == 0 {
                    continue;
                }
                for sin2 in [false, true] {
                    if sin2 && b == 0 {
                        continue;
                    }
                    out.push(HopfLabel { a, b, n, sin1, sin2 });
                }
            }
        }
    }
    out
}

/// Homogeneous Jacobi polynomials `ρⁿ P_n^{(α,β)}(u/ρ)` for `n = 0..=max`.
fn jacobi_homogeneous<T: Real>(max: usize, alpha: usize, beta: usize, u: T, rho: T) -> Vec<T> {
    let a = T::from_usize_lossy(alpha);
    let b = T::from_usize_lossy(beta);
    let two = T::c(2.0);
    let mut out = Vec::with_capacity(max + 1);
    out.push(T::one());
    if max == 0 {
        return out;
    }
    out.push((a + T::one()) * rho + (a + b + two) * (u - rho) / two);
    for n in 2..=max {
        let nf = T::from_usize_lossy(n);
        let s = two * nf + a + b;
        let c1 = (s - T::one()) * (s * (s - two) * u + (a * a - b * b) * rho);
        let c2 = two * (nf + a - T::one()) * (nf + b - T::one()) * s * rho * rho;
        let den = two * nf * (nf + a + b) * (s - two);
        out.push((c1 * out[n - 1] - c2 * out[n - 2]) / den);
    }
    out
}

/// Evaluates every raw harmonic of degree `0..=max_l` at `w ∈ ℝ⁴`.
/// Entry `l` of the result is ordered as [`hopf_labels`]`(l)`.
pub fn hopf_harmonics<T: Real>(max_l: usize, w: &[T; 4]) -> Vec<Vec<T>> {
    // Powers of z₁ and z₂ as (re, im).
    let pow = |x: T, y: T| {
        let mut v = Vec::with_capacity(max_l + 1);
        v.push((T::one(), T::zero()));
        for k in 1..=max_l {
            let (r, i) = v[k - 1];
            v.push((r * x - i * y, r * y + i * x));
        }
        v
    };
    let p1 = pow(w[0], w[1]);
    let p2 = pow(w[2], w[3]);
    let s1 = w[0] * w[0] + w[1] * w[1];
    let s2 = w[2] * w[2] + w[3] * w[3];
    let (u, rho) = (s1 - s2, s1 + s2);
    // Jacobi tables keyed by (a, b).
    let mut jac = vec![Vec::new(); (max_l + 1) * (max_l + 1)];
    for a in 0..=max_l {
        for b in 0..=max_l - a {
            jac[a * (max_l + 1) + b] = jacobi_homogeneous((max_l - a - b) / 2, b, a, u, rho);
        }
    }
    (0..=max_l)
        .map(|l| {
            hopf_labels(l)
                .iter()
                .map(|h| {
                    let f1 = if h.sin1 { p1[h.a].1 } else { p1[h.a].0 };
                    let f2 = if h.sin2 { p2[h.b].1 } else { p2[h.b].0 };
                    f1 * f2 * jac[h.a * (max_l + 1) + h.b][h.n]
                })
                .collect()
        })
        .collect()
}
