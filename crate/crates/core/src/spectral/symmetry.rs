//! Orthogonal projection of coefficient vectors onto `G`-invariant fields.

use crate::geometry::{SpherePoint, SymmetryGroup};
use crate::scalar::Real;
use crate::spectral::basis::{n_s3_modes, HarmonicBasis};
use crate::spectral::field::SpectralField;

/// `P_G = (1/|G|) Σ_g (u ↦ u∘g⁻¹)` in coefficient space. Group elements fix
/// `x₅`, so the projector acts on the S³ factor only and is block diagonal
/// with one `(l+1)² × (l+1)²` block per S³ degree `l`.
#[derive(Debug, Clone)]
pub struct GroupProjector<T> {
    trivial: bool,
    blocks: Vec<Vec<T>>,
}

impl<T: Real> GroupProjector<T> {
    pub fn new(basis: &HarmonicBasis<T>, group: &SymmetryGroup<T>) -> Self {
        let big_l = basis.max_degree();
        if group.is_trivial() {
            return Self { trivial: true, blocks: Vec::new() };
        }
        let s3 = basis.grid().s3();
        let inv_n = T::one() / T::from_usize_lossy(group.len());
        // Averaged values  (1/|G|) Σ_g Ĥ(g⁻¹ ω_a)  at every S³ node.
        let averaged: Vec<Vec<T>> = s3
            .nodes
            .iter()
            .map(|w| {
                let x = SpherePoint::on_equator(*w);
                let mut acc: Vec<T> = Vec::new();
                for g in group.elements() {
                    let y = x.transform_inverse(g);
                    let v = basis.s3_values(&y.perp());
                    if acc.is_empty() {
                        acc = v;
                    } else {
                        crate::scalar::axpy(T::one(), &v, &mut acc);
                    }
                }
                acc.iter_mut().for_each(|v| *v = *v * inv_n);
                acc
            })
            .collect();
        let plain: Vec<Vec<T>> = s3.nodes.iter().map(|w| basis.s3_values(w)).collect();
        let mut blocks = Vec::with_capacity(big_l + 1);
        let mut offset = 0;
        for l in 0..=big_l {
            let n = n_s3_modes(l);
            let mut p = vec![T::zero(); n * n];
            for (a, &wa) in s3.weights.iter().enumerate() {
                let h = &plain[a][offset..offset + n];
                let g = &averaged[a][offset..offset + n];
                for r in 0..n {
                    let hr = wa * h[r];
                    for c in 0..n {
                        p[r * n + c] = p[r * n + c] + hr * g[c];
                    }
                }
            }
            // Symmetrise away quadrature roundoff; the exact matrix is symmetric.
            for r in 0..n {
                for c in r + 1..n {
                    let m = T::c(0.5) * (p[r * n + c] + p[c * n + r]);
                    p[r * n + c] = m;
                    p[c * n + r] = m;
                }
            }
            blocks.push(p);
            offset += n;
        }
        Self { trivial: false, blocks }
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Projects a coefficient vector in place.
    pub fn apply_in_place(&self, basis: &HarmonicBasis<T>, c: &mut [T]) {
        if self.trivial {
            return;
        }
        let mut tmp = Vec::new();
        for b in basis.blocks() {
            let p = &self.blocks[b.l];
            let n = b.len;
            tmp.clear();
            tmp.extend_from_slice(&c[b.start..b.start + n]);
            for r in 0..n {
                c[b.start + r] = crate::scalar::dot(&p[r * n..(r + 1) * n], &tmp);
            }
        }
    }

    pub fn apply(&self, basis: &HarmonicBasis<T>, field: &SpectralField<T>) -> SpectralField<T> {
        let mut c = field.coefficients.clone();
        self.apply_in_place(basis, &mut c);
        SpectralField::from_coefficients(c)
    }

    /// Dimension of the invariant subspace.
    pub fn invariant_dimension(&self, basis: &HarmonicBasis<T>) -> usize {
        if self.trivial {
            return basis.len();
        }
        let tr = basis.blocks().iter().fold(T::zero(), |s, b| {
            let p = &self.blocks[b.l];
            s + (0..b.len).fold(T::zero(), |t, r| t + p[r * b.len + r])
        });
        tr.round().to_usize().unwrap_or(0)
    }
}
