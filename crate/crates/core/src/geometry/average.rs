//! Projection of sampled functions onto `G`-invariant functions.

use std::collections::HashMap;

use crate::error::Result;
use crate::geometry::{QuadratureGrid, SymmetryGroup};
use crate::scalar::Real;
use crate::spectral::{analyze, GroupProjector, HarmonicBasis};

/// How each group element moves the S³ nodes of a grid. Group elements fix
/// `x₅`, so a permutation of S³ nodes induces one of all interior nodes.
#[derive(Debug, Clone)]
pub struct GridAction {
    /// `perm[g][a]` is the S³ node index of `g(ω_a)`, when every image is a
    /// node.
    perm: Option<Vec<Vec<usize>>>,
    n_s3: usize,
}

impl GridAction {
    pub fn new<T: Real>(grid: &QuadratureGrid<T>, group: &SymmetryGroup<T>) -> Self {
        let nodes = &grid.s3().nodes;
        let key = |w: &[T; 4]| w.map(|v| (v.as_f64() * 1e7).round() as i64);
        let lookup: HashMap<[i64; 4], usize> = nodes.iter().enumerate().map(|(i, w)| (key(w), i)).collect();
        let tol = T::c(1e-9);
        let find = |w: &[T; 4]| -> Option<usize> {
            if let Some(&i) = lookup.get(&key(w)) {
                return Some(i);
            }
            nodes
                .iter()
                .position(|v| (0..4).all(|c| (v[c] - w[c]).abs() < tol))
        };
        let mut perm = Vec::with_capacity(group.len());
        for g in group.elements() {
            let mut p = Vec::with_capacity(nodes.len());
            for w in nodes {
                let x = crate::geometry::SpherePoint::on_equator(*w).transform(g);
                match find(&x.perp()) {
                    Some(i) => p.push(i),
                    None => {
                        return Self { perm: None, n_s3: nodes.len() };
                    }
                }
            }
            perm.push(p);
        }
        Self { perm: Some(perm), n_s3: nodes.len() }
    }

    /// Whether the node set is closed under the group.
    pub fn is_closed(&self) -> bool {
        self.perm.is_some()
    }

    /// Interior-node index of `g(x_i)` for group element `g`.
    pub fn image(&self, g: usize, i: usize) -> Option<usize> {
        let p = self.perm.as_ref()?;
        let (row, a) = (i / self.n_s3, i % self.n_s3);
        Some(row * self.n_s3 + p[g][a])
    }

    /// Boundary-node index of `g(ω_a)`.
    pub fn boundary_image(&self, g: usize, a: usize) -> Option<usize> {
        Some(self.perm.as_ref()?[g][a])
    }

    /// Averages samples over their images on the node set. Works for
    /// interior samples (any number of full rows) and boundary samples.
    pub fn average_on_nodes<T: Real>(&self, samples: &[T]) -> Option<Vec<T>> {
        let p = self.perm.as_ref()?;
        let n = T::from_usize_lossy(p.len());
        Some(
            (0..samples.len())
                .map(|i| {
                    let (row, a) = (i / self.n_s3, i % self.n_s3);
                    p.iter().fold(T::zero(), |s, pg| s + samples[row * self.n_s3 + pg[a]]) / n
                })
                .collect(),
        )
    }
}

/// Projects full-sphere samples onto `G`-invariant functions.
///
/// When the node set is closed under `G` this is the exact average
/// `(1/|G|) Σ_g f(g x)`. Otherwise images are evaluated by band-limited
/// interpolation: the samples are corrected by
/// `synth((P_G − I) analyze f)`, which equals the average for band-limited
/// `f`, leaves invariant data untouched and is idempotent.
pub fn group_average<T: Real>(
    samples: &[T],
    group: &SymmetryGroup<T>,
    basis: &HarmonicBasis<T>,
) -> Result<Vec<T>> {
    let action = GridAction::new(basis.grid(), group);
    if let Some(avg) = action.average_on_nodes(samples) {
        return Ok(avg);
    }
    let field = analyze(basis, samples)?;
    let proj = GroupProjector::new(basis, group).apply(basis, &field);
    let diff: Vec<T> = proj
        .coefficients
        .iter()
        .zip(&field.coefficients)
        .map(|(&p, &c)| p - c)
        .collect();
    let corr = basis.synth_full(&diff);
    Ok(samples.iter().zip(corr).map(|(&f, c)| f + c).collect())
}
