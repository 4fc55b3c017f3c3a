//! Product quadrature on S⁴ and on its equator S³.
//!
//! S⁴ is parametrised as `x = (√(1−t²) ω, t)` with `t = x₅ = cos θ` and
//! `ω ∈ S³`; the volume element is `(1−t²) dt dω`. The polar factor uses
//! Gauss–Legendre in `t` with the Jacobian folded into the weights. The S³
//! factor uses Hopf coordinates
//! `ω = (√s cos φ₁, √s sin φ₁, √(1−s) cos φ₂, √(1−s) sin φ₂)` with
//! `dω = ½ ds dφ₁ dφ₂`, Gauss–Legendre in `s` and uniform angles.

use crate::error::{Error, Result};
use crate::geometry::point::SpherePoint;
use crate::geometry::quadrature::{gauss_legendre, gauss_legendre_on};
use crate::scalar::Real;

/// Degree-exact quadrature rule for S³.
#[derive(Debug, Clone)]
pub struct Sphere3Rule<T> {
    pub nodes: Vec<[T; 4]>,
    pub weights: Vec<T>,
    /// Number of uniform samples per Hopf angle.
    pub angular: usize,
    pub radial: usize,
}

impl<T: Real> Sphere3Rule<T> {
    /// Rule exact for polynomials of degree `≤ 2·resolution` on S³.
    pub fn new(resolution: usize, angular_multiple: usize) -> Self {
        let radial = (resolution + 2) / 2;
        let mult = angular_multiple.max(1);
        let min_angular = 2 * resolution + 1;
        let angular = min_angular.div_ceil(mult) * mult;
        let (s_nodes, s_weights) = gauss_legendre_on::<T>(radial, T::zero(), T::one());
        let dphi = T::c(2.0) * T::PI() / T::from_usize_lossy(angular);
        let mut nodes = Vec::with_capacity(radial * angular * angular);
        let mut weights = Vec::with_capacity(radial * angular * angular);
        for (&s, &ws) in s_nodes.iter().zip(&s_weights) {
            let c = s.sqrt();
            let d = (T::one() - s).sqrt();
            for j1 in 0..angular {
                let p1 = dphi * T::from_usize_lossy(j1);
                for j2 in 0..angular {
                    let p2 = dphi * T::from_usize_lossy(j2);
                    nodes.push([c * p1.cos(), c * p1.sin(), d * p2.cos(), d * p2.sin()]);
                    weights.push(T::c(0.5) * ws * dphi * dphi);
                }
            }
        }
        Self { nodes, weights, angular, radial }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Nodes and positive weights for S⁴ (full sphere) and its equator S³.
///
/// Interior nodes are stored row-major: node `i_t · n_s3 + a` pairs polar
/// node `i_t` with S³ node `a`. Polar nodes are sorted ascending and come in
/// `±t` pairs, none on the equator, so the node set is closed under `R`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid<T> {
    resolution: usize,
    t_nodes: Vec<T>,
    t_weights: Vec<T>,
    s3: Sphere3Rule<T>,
    interior_nodes: Vec<SpherePoint<T>>,
    interior_weights: Vec<T>,
    boundary_nodes: Vec<SpherePoint<T>>,
}

impl<T: Real> QuadratureGrid<T> {
    /// Builds a grid exact for products of spherical harmonics up to total
    /// degree `2·resolution`. Angular counts are multiples of 4, which makes
    /// the node set closed under coordinate reflections and quarter turns.
    pub fn new(resolution: usize) -> Result<Self> {
        Self::with_angular_multiple(resolution, 4)
    }

    /// Like [`QuadratureGrid::new`], with Hopf angular counts rounded up to a
    /// multiple of `angular_multiple` so that rotations by `2π/k` in the
    /// `(x₁,x₂)` and `(x₃,x₄)` planes permute nodes when `k` divides it.
    pub fn with_angular_multiple(resolution: usize, angular_multiple: usize) -> Result<Self> {
        if resolution < 1 {
            return Err(Error::Config("grid resolution must be at least 1".into()));
        }
        let mut n_t = resolution + 2;
        if n_t % 2 == 1 {
            n_t += 1;
        }
        let (t_gl, w_gl) = gauss_legendre::<T>(n_t);
        let t_weights: Vec<T> = t_gl
            .iter()
            .zip(&w_gl)
            .map(|(&t, &w)| w * (T::one() - t * t))
            .collect();
        let s3 = Sphere3Rule::new(resolution, angular_multiple);
        let mut interior_nodes = Vec::with_capacity(n_t * s3.len());
        let mut interior_weights = Vec::with_capacity(n_t * s3.len());
        for (&t, &wt) in t_gl.iter().zip(&t_weights) {
            let r = (T::one() - t * t).sqrt();
            for (w, &ww) in s3.nodes.iter().zip(&s3.weights) {
                interior_nodes.push(SpherePoint::new([r * w[0], r * w[1], r * w[2], r * w[3], t]));
                interior_weights.push(wt * ww);
            }
        }
        let boundary_nodes = s3.nodes.iter().map(|&w| SpherePoint::on_equator(w)).collect();
        Ok(Self {
            resolution,
            t_nodes: t_gl,
            t_weights,
            s3,
            interior_nodes,
            interior_weights,
            boundary_nodes,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn t_nodes(&self) -> &[T] {
        &self.t_nodes
    }

    /// Polar weights including the `(1−t²)` Jacobian.
    pub fn t_weights(&self) -> &[T] {
        &self.t_weights
    }

    pub fn n_t(&self) -> usize {
        self.t_nodes.len()
    }

    pub fn s3(&self) -> &Sphere3Rule<T> {
        &self.s3
    }

    pub fn n_s3(&self) -> usize {
        self.s3.len()
    }

    pub fn interior_nodes(&self) -> &[SpherePoint<T>] {
        &self.interior_nodes
    }

    pub fn interior_weights(&self) -> &[T] {
        &self.interior_weights
    }

    pub fn boundary_nodes(&self) -> &[SpherePoint<T>] {
        &self.boundary_nodes
    }

    pub fn boundary_weights(&self) -> &[T] {
        &self.s3.weights
    }

    /// Index of `R(x)` for interior node `idx`.
    pub fn mirror_index(&self, idx: usize) -> usize {
        let n = self.n_s3();
        let (i_t, a) = (idx / n, idx % n);
        (self.n_t() - 1 - i_t) * n + a
    }

    /// First polar row with `t > 0`.
    pub fn first_upper_row(&self) -> usize {
        self.n_t() / 2
    }

    /// Number of interior nodes with `x₅ > 0`.
    pub fn hemisphere_len(&self) -> usize {
        (self.n_t() - self.first_upper_row()) * self.n_s3()
    }

    /// Interior index of hemisphere node `h`. Hemisphere nodes are the
    /// trailing rows of the full grid, in the same order.
    pub fn hemisphere_to_full(&self, h: usize) -> usize {
        self.first_upper_row() * self.n_s3() + h
    }

    pub fn hemisphere_nodes(&self) -> &[SpherePoint<T>] {
        &self.interior_nodes[self.first_upper_row() * self.n_s3()..]
    }

    pub fn hemisphere_weights(&self) -> &[T] {
        &self.interior_weights[self.first_upper_row() * self.n_s3()..]
    }

    /// Full-sphere samples restricted to the hemisphere nodes.
    pub fn restrict<'a>(&self, full: &'a [T]) -> &'a [T] {
        &full[self.first_upper_row() * self.n_s3()..]
    }

    pub fn integrate_sphere(&self, samples: &[T]) -> T {
        weighted_sum(&self.interior_weights, samples)
    }

    /// Integral over S⁴₊ of hemisphere samples.
    pub fn integrate_hemisphere(&self, samples: &[T]) -> T {
        weighted_sum(self.hemisphere_weights(), samples)
    }

    pub fn integrate_boundary(&self, samples: &[T]) -> T {
        weighted_sum(self.boundary_weights(), samples)
    }

    /// Checks closure of the node set under `R` (structural invariant).
    pub fn is_reflection_closed(&self) -> bool {
        let tol = T::c(1e3) * T::epsilon();
        (0..self.interior_nodes.len()).all(|i| {
            let m = self.mirror_index(i);
            let r = self.interior_nodes[i].reflect();
            self.interior_nodes[m]
                .coords()
                .iter()
                .zip(r.coords())
                .all(|(a, b)| (*a - *b).abs() <= tol)
                && self.interior_weights[i] == self.interior_weights[m]
        })
    }

    /// Even extension of hemisphere samples to the full node set:
    /// `out(x) = in(x)` for `x₅ > 0` and `out(x) = in(R x)` for `x₅ < 0`.
    pub fn even_extend(&self, hemisphere: &[T]) -> Result<Vec<T>> {
        if hemisphere.len() != self.hemisphere_len() {
            return Err(Error::Structure(format!(
                "expected {} hemisphere samples, got {}",
                self.hemisphere_len(),
                hemisphere.len()
            )));
        }
        if !self.is_reflection_closed() {
            return Err(Error::Structure("node set is not closed under x5 -> -x5".into()));
        }
        let offset = self.first_upper_row() * self.n_s3();
        let mut out = vec![T::zero(); self.interior_nodes.len()];
        for (i, o) in out.iter_mut().enumerate() {
            let src = if i >= offset { i } else { self.mirror_index(i) };
            *o = hemisphere[src - offset];
        }
        Ok(out)
    }

    /// Samples a function at every interior node.
    pub fn sample<F: Fn(&SpherePoint<T>) -> T>(&self, f: F) -> Vec<T> {
        self.interior_nodes.iter().map(f).collect()
    }

    pub fn sample_hemisphere<F: Fn(&SpherePoint<T>) -> T>(&self, f: F) -> Vec<T> {
        self.hemisphere_nodes().iter().map(f).collect()
    }

    pub fn sample_boundary<F: Fn(&SpherePoint<T>) -> T>(&self, f: F) -> Vec<T> {
        self.boundary_nodes.iter().map(f).collect()
    }
}

fn weighted_sum<T: Real>(w: &[T], f: &[T]) -> T {
    debug_assert_eq!(w.len(), f.len());
    w.iter().zip(f).fold(T::zero(), |a, (&wi, &fi)| a + wi * fi)
}
