//! Orthonormal basis of even spherical harmonics on S⁴.
//!
//! Modes are `Y_{k,l,z}(x) = g_{k,l}(x₅) · H_{l,z}(x₁..x₄)` where `H_{l,z}` is a
//! degree-`l` harmonic polynomial on ℝ⁴ and `g_{k,l}` is a combination of
//! Gegenbauer polynomials `C^{(l+3/2)}_{k−l}`. Parity under `x₅ ↦ −x₅` is that
//! of `k − l`, so only even `k − l` are kept. Both factors are orthonormalised
//! against the grid quadrature, which makes transforms exact on the grid.

use std::ops::Range;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geometry::{QuadratureGrid, SpherePoint};
use crate::scalar::Real;
use crate::spectral::polynomials::{gegenbauer_all, hopf_harmonics};

/// `μ_k = k(k+3)`, eigenvalue of `−Δ` on degree-`k` harmonics of S⁴.
pub fn eigen_laplace<T: Real>(k: usize) -> T {
    T::from_usize_lossy(k * (k + 3))
}

/// `ν_k = μ_k(μ_k + 2)`, eigenvalue of `Δ² − 2Δ`.
pub fn eigen_paneitz<T: Real>(k: usize) -> T {
    let mu = eigen_laplace::<T>(k);
    mu * (mu + T::c(2.0))
}

/// Position of a mode in the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mode {
    /// Total degree on S⁴.
    pub k: usize,
    /// Degree of the S³ factor.
    pub l: usize,
    /// Index of the S³ factor within degree `l`.
    pub z: usize,
    /// Running index among modes of degree `k`.
    pub m: usize,
}

impl Mode {
    pub fn label(&self) -> String {
        format!("k{}_m{}", self.k, self.m)
    }
}

/// A contiguous run of modes sharing `(k, l)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Block {
    pub k: usize,
    pub l: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct HarmonicBasis<T> {
    max_degree: usize,
    grid: QuadratureGrid<T>,
    modes: Vec<Mode>,
    blocks: Vec<Block>,
    /// Column offset of degree `l` in the S³ table.
    lz_offset: Vec<usize>,
    n_cols: usize,
    /// Per `l`: orthonormalising coefficients over `C_{2m}^{(l+3/2)}`,
    /// row `m` gives `g_{l+2m,l}`.
    t_coef: Vec<Vec<Vec<T>>>,
    /// Per `l`: orthonormalising coefficients over the raw harmonics.
    s3_coef: Vec<Vec<Vec<T>>>,
    /// `g_{k,l}(t_i)(1−t_i²)^{l/2}`, indexed `[i_t][block]`.
    g_tab: Vec<Vec<T>>,
    /// Same at `t = 0` (equator).
    g_eq: Vec<T>,
    /// Normalised S³ harmonics at S³ nodes, row-major `[a][col]`.
    z_tab: Vec<T>,
    /// Derivative tables for pointwise gradients, built on first use.
    grad: OnceLock<GradientTables<T>>,
}

#[derive(Debug, Clone)]
struct GradientTables<T> {
    /// `d/dt` of `g_tab`.
    dg_tab: Vec<Vec<T>>,
    /// Ambient gradient of the degree-0 extension of each S³ harmonic,
    /// `[c][a * n_cols + col]`.
    dz_tab: [Vec<T>; 4],
}

pub(crate) fn n_s3_modes(l: usize) -> usize {
    (l + 1) * (l + 1)
}

impl<T: Real> HarmonicBasis<T> {
    /// Builds the basis of even modes with degree `≤ max_degree`. The grid
    /// resolution must be at least `max_degree`.
    pub fn new(max_degree: usize, grid: &QuadratureGrid<T>) -> Result<Self> {
        if grid.resolution() < max_degree {
            return Err(Error::Config(format!(
                "grid resolution {} is too small for basis degree {max_degree}",
                grid.resolution()
            )));
        }
        let big_l = max_degree;
        let mut modes = Vec::new();
        let mut blocks = Vec::new();
        for k in 0..=big_l {
            let mut m = 0;
            for l in (k % 2..=k).step_by(2) {
                let len = n_s3_modes(l);
                blocks.push(Block { k, l, start: modes.len(), len });
                for z in 0..len {
                    modes.push(Mode { k, l, z, m });
                    m += 1;
                }
            }
        }
        let mut lz_offset = Vec::with_capacity(big_l + 1);
        let mut n_cols = 0;
        for l in 0..=big_l {
            lz_offset.push(n_cols);
            n_cols += n_s3_modes(l);
        }

        // Polar factor.
        let tw = grid.t_weights();
        let tn = grid.t_nodes();
        let mut t_coef = Vec::with_capacity(big_l + 1);
        for l in 0..=big_l {
            let lam = T::from_usize_lossy(l) + T::c(1.5);
            let count = (big_l - l) / 2 + 1;
            let samples: Vec<Vec<T>> = (0..count)
                .map(|m| {
                    tn.iter()
                        .map(|&t| {
                            let c = gegenbauer_all(2 * m, lam, t)[2 * m];
                            c * (T::one() - t * t).powi(l as i32).sqrt()
                        })
                        .collect()
                })
                .collect();
            t_coef.push(gram_schmidt(&samples, tw)?);
        }

        // S³ factor.
        let s3 = grid.s3();
        let raw: Vec<Vec<Vec<T>>> = s3.nodes.iter().map(|w| hopf_harmonics(big_l, w)).collect();
        let mut s3_coef = Vec::with_capacity(big_l + 1);
        for l in 0..=big_l {
            let samples: Vec<Vec<T>> = (0..n_s3_modes(l))
                .map(|z| raw.iter().map(|r| r[l][z]).collect())
                .collect();
            s3_coef.push(gram_schmidt(&samples, &s3.weights)?);
        }
        let mut z_tab = vec![T::zero(); s3.len() * n_cols];
        for (a, r) in raw.iter().enumerate() {
            for l in 0..=big_l {
                let row = &mut z_tab[a * n_cols + lz_offset[l]..a * n_cols + lz_offset[l] + n_s3_modes(l)];
                apply_lower(&s3_coef[l], &r[l], row);
            }
        }

        let mut basis = Self {
            max_degree,
            grid: grid.clone(),
            modes,
            blocks,
            lz_offset,
            n_cols,
            t_coef,
            s3_coef,
            g_tab: Vec::new(),
            g_eq: Vec::new(),
            z_tab,
            grad: OnceLock::new(),
        };
        basis.g_tab = tn.iter().map(|&t| basis.polar_values(t, true)).collect();
        basis.g_eq = basis.polar_values(T::zero(), true);
        Ok(basis)
    }

    /// Polar factor of every block at `t`. With `with_radial`, the factor
    /// `(1−t²)^{l/2}` of the S³ part is included.
    fn polar_values(&self, t: T, with_radial: bool) -> Vec<T> {
        let big_l = self.max_degree;
        let r = (T::one() - t * t).max(T::zero()).sqrt();
        let mut per_l: Vec<Vec<T>> = Vec::with_capacity(big_l + 1);
        for l in 0..=big_l {
            let lam = T::from_usize_lossy(l) + T::c(1.5);
            let c = gegenbauer_all(big_l - l, lam, t);
            let even: Vec<T> = c.iter().step_by(2).copied().collect();
            let mut g = vec![T::zero(); even.len()];
            apply_lower(&self.t_coef[l], &even, &mut g);
            if with_radial {
                let s = r.powi(l as i32);
                g.iter_mut().for_each(|v| *v = *v * s);
            }
            per_l.push(g);
        }
        self.blocks.iter().map(|b| per_l[b.l][(b.k - b.l) / 2]).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn grid(&self) -> &QuadratureGrid<T> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub(crate) fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `ν_k` for each mode.
    pub fn paneitz_eigenvalues(&self) -> Vec<T> {
        self.modes.iter().map(|m| eigen_paneitz(m.k)).collect()
    }

    /// `μ_k` for each mode.
    pub fn laplace_eigenvalues(&self) -> Vec<T> {
        self.modes.iter().map(|m| eigen_laplace(m.k)).collect()
    }

    /// Value of the constant mode, `1/√(8π²/3)`.
    pub fn constant_mode_value(&self) -> T {
        T::one() / crate::scalar::vol_s4::<T>().sqrt()
    }

    /// `∫_{S⁴₊} Y_j`, nonzero only for the constant mode.
    pub fn hemisphere_mode_integrals(&self) -> Vec<T> {
        let mut v = vec![T::zero(); self.len()];
        v[0] = T::c(0.5) * crate::scalar::vol_s4::<T>().sqrt();
        v
    }

    /// Normalised S³ harmonics of every degree at a point of ℝ⁴ (homogeneous
    /// of degree `l`), indexed by column.
    pub(crate) fn s3_values(&self, w: &[T; 4]) -> Vec<T> {
        let raw = hopf_harmonics(self.max_degree, w);
        let mut out = vec![T::zero(); self.n_cols];
        for l in 0..=self.max_degree {
            let o = self.lz_offset[l];
            apply_lower(&self.s3_coef[l], &raw[l], &mut out[o..o + n_s3_modes(l)]);
        }
        out
    }

    /// Values of every mode at an arbitrary point of S⁴.
    pub fn eval_modes(&self, x: &SpherePoint<T>) -> Vec<T> {
        let g = self.polar_values(x.x5(), false);
        let h = self.s3_values(&x.perp());
        let mut out = vec![T::zero(); self.len()];
        for (b, &gb) in self.blocks.iter().zip(&g) {
            let o = self.lz_offset[b.l];
            for z in 0..b.len {
                out[b.start + z] = gb * h[o + z];
            }
        }
        out
    }

    /// Samples of mode `j` at all interior nodes.
    pub fn mode_samples(&self, j: usize) -> Vec<T> {
        let mut c = vec![T::zero(); self.len()];
        c[j] = T::one();
        self.synth_rows(&c, 0..self.grid.n_t())
    }

    /// S³ coefficient vector (by column) for one polar row.
    fn row_columns(&self, c: &[T], g: &[T]) -> Vec<T> {
        let mut v = vec![T::zero(); self.n_cols];
        for (b, &gb) in self.blocks.iter().zip(g) {
            let o = self.lz_offset[b.l];
            for z in 0..b.len {
                v[o + z] = v[o + z] + gb * c[b.start + z];
            }
        }
        v
    }

    fn s3_synth(&self, v: &[T], out: &mut [T]) {
        let nc = self.n_cols;
        for (a, o) in out.iter_mut().enumerate() {
            *o = crate::scalar::dot(&self.z_tab[a * nc..(a + 1) * nc], v);
        }
    }

    /// `Σ_a w_a f_a Z[a][col]`.
    fn s3_adjoint(&self, f: &[T]) -> Vec<T> {
        let nc = self.n_cols;
        let w = &self.grid.s3().weights;
        let mut v = vec![T::zero(); nc];
        for (a, &fa) in f.iter().enumerate() {
            let s = fa * w[a];
            if s == T::zero() {
                continue;
            }
            crate::scalar::axpy(s, &self.z_tab[a * nc..(a + 1) * nc], &mut v);
        }
        v
    }

    /// Field values at the interior nodes of the given polar rows.
    pub fn synth_rows(&self, c: &[T], rows: Range<usize>) -> Vec<T> {
        let n = self.grid.n_s3();
        let mut out = vec![T::zero(); rows.len() * n];
        for (r, i) in rows.enumerate() {
            let v = self.row_columns(c, &self.g_tab[i]);
            self.s3_synth(&v, &mut out[r * n..(r + 1) * n]);
        }
        out
    }

    fn gradient_tables(&self) -> &GradientTables<T> {
        self.grad.get_or_init(|| {
            // Five-point central differences.
            let h = T::c(1e-4);
            let st = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
            let scale = T::one() / (T::c(12.0) * h);
            let dg_tab = self
                .grid
                .t_nodes()
                .iter()
                .map(|&t| {
                    let mut d = vec![T::zero(); self.blocks.len()];
                    for &(o, c) in &st {
                        let g = self.polar_values(t + T::c(o) * h, true);
                        crate::scalar::axpy(T::c(c) * scale, &g, &mut d);
                    }
                    d
                })
                .collect();
            let nodes = &self.grid.s3().nodes;
            let nc = self.n_cols;
            let mut dz_tab: [Vec<T>; 4] = std::array::from_fn(|_| vec![T::zero(); nodes.len() * nc]);
            for (a, w) in nodes.iter().enumerate() {
                for (c, tab) in dz_tab.iter_mut().enumerate() {
                    let row = &mut tab[a * nc..(a + 1) * nc];
                    for &(o, k) in &st {
                        let mut y = *w;
                        y[c] = y[c] + T::c(o) * h;
                        let n = y.iter().fold(T::zero(), |s, &v| s + v * v).sqrt();
                        let y = y.map(|v| v / n);
                        crate::scalar::axpy(T::c(k) * scale, &self.s3_values(&y), row);
                    }
                }
            }
            GradientTables { dg_tab, dz_tab }
        })
    }

    /// `|∇u|²` (round metric of S⁴) at the interior nodes of the given polar
    /// rows.
    pub fn gradient_sq_rows(&self, c: &[T], rows: Range<usize>) -> Vec<T> {
        let tabs = self.gradient_tables();
        let n = self.grid.n_s3();
        let nc = self.n_cols;
        let tn = self.grid.t_nodes();
        let mut out = vec![T::zero(); rows.len() * n];
        let mut buf = vec![T::zero(); n];
        for (r, i) in rows.enumerate() {
            let s2 = T::one() - tn[i] * tn[i];
            let dv = self.row_columns(c, &tabs.dg_tab[i]);
            self.s3_synth(&dv, &mut buf);
            let o = &mut out[r * n..(r + 1) * n];
            for (x, &d) in o.iter_mut().zip(&buf) {
                *x = s2 * d * d;
            }
            let v = self.row_columns(c, &self.g_tab[i]);
            for tab in &tabs.dz_tab {
                for (a, x) in o.iter_mut().enumerate() {
                    let g = crate::scalar::dot(&tab[a * nc..(a + 1) * nc], &v);
                    *x = *x + g * g / s2;
                }
            }
        }
        out
    }

    /// `|∇u|²` at the hemisphere nodes.
    pub fn gradient_sq_hemisphere(&self, c: &[T]) -> Vec<T> {
        self.gradient_sq_rows(c, self.grid.first_upper_row()..self.grid.n_t())
    }

    /// Field values at every interior node.
    pub fn synth_full(&self, c: &[T]) -> Vec<T> {
        self.synth_rows(c, 0..self.grid.n_t())
    }

    /// Field values at the hemisphere nodes (`x₅ > 0`).
    pub fn synth_hemisphere(&self, c: &[T]) -> Vec<T> {
        self.synth_rows(c, self.grid.first_upper_row()..self.grid.n_t())
    }

    /// Field values at the boundary nodes.
    pub fn synth_boundary(&self, c: &[T]) -> Vec<T> {
        let v = self.row_columns(c, &self.g_eq);
        let mut out = vec![T::zero(); self.grid.n_s3()];
        self.s3_synth(&v, &mut out);
        out
    }

    /// Quadrature of `f · Y_j` over the given polar rows, for every mode.
    pub fn integrate_rows(&self, f: &[T], rows: Range<usize>) -> Vec<T> {
        let n = self.grid.n_s3();
        let tw = self.grid.t_weights();
        let mut c = vec![T::zero(); self.len()];
        for (r, i) in rows.enumerate() {
            let v = self.s3_adjoint(&f[r * n..(r + 1) * n]);
            let g = &self.g_tab[i];
            for (b, &gb) in self.blocks.iter().zip(g) {
                let s = gb * tw[i];
                let o = self.lz_offset[b.l];
                for z in 0..b.len {
                    c[b.start + z] = c[b.start + z] + s * v[o + z];
                }
            }
        }
        c
    }

    /// `∫_{S⁴₊} f Y_j` for hemisphere samples `f`.
    pub fn integrate_hemisphere(&self, f: &[T]) -> Vec<T> {
        self.integrate_rows(f, self.grid.first_upper_row()..self.grid.n_t())
    }

    /// `∮_{S³} f Y_j` for boundary samples `f`.
    pub fn integrate_boundary(&self, f: &[T]) -> Vec<T> {
        let v = self.s3_adjoint(f);
        let mut c = vec![T::zero(); self.len()];
        for (b, &gb) in self.blocks.iter().zip(&self.g_eq) {
            let o = self.lz_offset[b.l];
            for z in 0..b.len {
                c[b.start + z] = gb * v[o + z];
            }
        }
        c
    }

    /// Full-sphere samples of `f`, checked for evenness.
    pub fn check_parity(&self, f: &[T], tol: T) -> Result<()> {
        if f.len() != self.grid.interior_nodes().len() {
            return Err(Error::Structure(format!(
                "expected {} samples, got {}",
                self.grid.interior_nodes().len(),
                f.len()
            )));
        }
        let scale = f.iter().fold(T::one(), |m, v| m.max(v.abs()));
        let odd = (0..f.len()).fold(T::zero(), |m, i| {
            m.max((f[i] - f[self.grid.mirror_index(i)]).abs() / T::c(2.0))
        });
        if odd > tol * scale {
            return Err(Error::Parity {
                odd: odd.as_f64(),
                tol: (tol * scale).as_f64(),
            });
        }
        Ok(())
    }
}

/// Modified Gram–Schmidt (two passes) on sampled functions under a discrete
/// inner product. Returns lower-triangular coefficients `A` with
/// `e_i = Σ_j A[i][j] f_j` orthonormal.
pub(crate) fn gram_schmidt<T: Real>(f: &[Vec<T>], w: &[T]) -> Result<Vec<Vec<T>>> {
    let n = f.len();
    let ip = |a: &[T], b: &[T]| {
        a.iter().zip(b).zip(w).fold(T::zero(), |s, ((&x, &y), &wi)| s + x * y * wi)
    };
    let mut e: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut coef: Vec<Vec<T>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = f[i].clone();
        let mut c = vec![T::zero(); n];
        c[i] = T::one();
        for _ in 0..2 {
            for j in 0..i {
                let p = ip(&v, &e[j]);
                for (vk, &ek) in v.iter_mut().zip(&e[j]) {
                    *vk = *vk - p * ek;
                }
                for k in 0..=j {
                    c[k] = c[k] - p * coef[j][k];
                }
            }
        }
        let nrm = ip(&v, &v).sqrt();
        let raw = ip(&f[i], &f[i]).sqrt();
        if !(nrm > T::c(1e-10) * raw) {
            return Err(Error::Structure(format!(
                "basis function {i} is linearly dependent on the grid"
            )));
        }
        v.iter_mut().for_each(|x| *x = *x / nrm);
        c.iter_mut().for_each(|x| *x = *x / nrm);
        e.push(v);
        coef.push(c);
    }
    Ok(coef)
}

/// `out = A · x` for lower-triangular `A`.
fn apply_lower<T: Real>(a: &[Vec<T>], x: &[T], out: &mut [T]) {
    for (i, o) in out.iter_mut().enumerate() {
        *o = a[i][..=i].iter().zip(x).fold(T::zero(), |s, (&c, &v)| s + c * v);
    }
}
