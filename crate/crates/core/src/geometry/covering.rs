//! Finite covering of the equator adapted to a symmetry group: a
//! neighbourhood `U_δ` of the fixed set plus geodesic balls `A_i = B_ρ(p_i)`,
//! each paired with a group element `φ_i` that moves it away from itself,
//! and the residual interior region `Ω` at height at least `t`.

use crate::error::{Error, Result};
use crate::geometry::grid::QuadratureGrid;
use crate::geometry::group::{FixedSetKind, Mat5, SymmetryGroup};
use crate::geometry::point::{clamp_acos, SpherePoint};
use crate::scalar::Real;

const MAX_SHRINKS: usize = 40;
const SHRINK: f64 = 0.8;

/// Default width of the fixed-set neighbourhood `U_δ`.
pub const DEFAULT_DELTA: f64 = 0.5;
/// Default tube height `t`.
pub const DEFAULT_T: f64 = 0.2;
/// Default ball radius `ρ`.
pub const DEFAULT_RHO: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct CoveringConfig<T> {
    pub delta: T,
    pub t: T,
    pub rho: T,
    /// Separation constant: tubes are at least `eps` apart from their
    /// partners, and `Ω` is at least `eps` away from the equator.
    pub eps: T,
    pub centers: Vec<SpherePoint<T>>,
    pub partners: Vec<Mat5<T>>,
    pub fixed_kind: FixedSetKind,
    fixed_projector: [[T; 4]; 4],
}

impl<T: Real> CoveringConfig<T> {
    /// Images `φ_i(p_i)` of the centers.
    pub fn partner_centers(&self) -> Vec<SpherePoint<T>> {
        self.centers.iter().zip(&self.partners).map(|(c, g)| c.transform(g)).collect()
    }

    /// Regions containing `x`: tube regions and `Ω` for a hemisphere point
    /// (`interior = true`), otherwise the boundary sets. Balls are
    /// prefiltered by the angle between foot points, so this is much cheaper
    /// than testing every region.
    pub fn regions_at(&self, x: &SpherePoint<T>, interior: bool, partner_centers: &[SpherePoint<T>]) -> Vec<CoverRegion> {
        let mut out = Vec::new();
        let contains = |r| if interior { self.interior_contains(r, x) } else { self.boundary_contains(r, x) };
        if self.has_fixed_set() && contains(CoverRegion::Fixed) {
            out.push(CoverRegion::Fixed);
        }
        let w = Self::foot(x);
        let reach = if interior { self.rho + self.t } else { self.rho };
        let cos_reach = (reach + T::c(1e-9)).min(T::PI()).cos();
        let near = |c: &SpherePoint<T>| {
            let p = c.perp();
            (0..4).fold(T::zero(), |a, k| a + p[k] * w[k]) > cos_reach
        };
        for (i, c) in self.centers.iter().enumerate() {
            if near(c) && contains(CoverRegion::Ball(i)) {
                out.push(CoverRegion::Ball(i));
            }
        }
        for (i, c) in partner_centers.iter().enumerate() {
            if near(c) && contains(CoverRegion::Partner(i)) {
                out.push(CoverRegion::Partner(i));
            }
        }
        if interior && contains(CoverRegion::Omega) {
            out.push(CoverRegion::Omega);
        }
        out
    }
}

/// One of the covering sets, either on S³ or as a tube in S⁴₊.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverRegion {
    /// `U_δ` on S³, `(U_δ)ᵗ` in S⁴₊.
    Fixed,
    /// `A_i`, resp. `(A_i)ᵗ`.
    Ball(usize),
    /// `φ_i(A_i)`, resp. `φ_i((A_i)ᵗ)`.
    Partner(usize),
    /// `Ω = {x ∈ S⁴₊ : dist(x, S³) ≥ t}`; empty on S³.
    Omega,
}

impl<T: Real> CoveringConfig<T> {
    pub fn n_balls(&self) -> usize {
        self.centers.len()
    }

    pub fn has_fixed_set(&self) -> bool {
        self.fixed_kind != FixedSetKind::Empty
    }

    /// Geodesic distance on S³ from a boundary direction to the fixed set.
    fn s3_distance_to_fixed(&self, w: &[T; 4]) -> T {
        if !self.has_fixed_set() {
            return T::infinity();
        }
        let p = &self.fixed_projector;
        let n = norm4(w);
        let mut n2 = T::zero();
        for row in p {
            let v = (0..4).fold(T::zero(), |a, c| a + row[c] * w[c] / n);
            n2 = n2 + v * v;
        }
        clamp_acos(n2.sqrt())
    }

    /// Distance in S⁴ from `x` to a subset of S³ whose S³-distance function
    /// from the foot point of `x` is `d_foot`, thickened by `r`.
    fn tube_distance(x: &SpherePoint<T>, d_foot: T, r: T) -> T {
        let h = x.height();
        let gap = (d_foot - r).max(T::zero());
        clamp_acos(h.cos() * gap.cos())
    }

    fn foot(x: &SpherePoint<T>) -> [T; 4] {
        let w = x.perp();
        let n = norm4(&w);
        if n == T::zero() {
            [T::one(), T::zero(), T::zero(), T::zero()]
        } else {
            w.map(|v| v / n)
        }
    }

    fn s3_distance(a: &[T; 4], b: &[T; 4]) -> T {
        clamp_acos((0..4).fold(T::zero(), |s, i| s + a[i] * b[i]))
    }

    /// Distance in S⁴ from `x` to the boundary set of `region`.
    pub fn distance_to_boundary_set(&self, region: CoverRegion, x: &SpherePoint<T>) -> T {
        let w = Self::foot(x);
        match region {
            CoverRegion::Fixed => {
                if !self.has_fixed_set() {
                    return T::infinity();
                }
                Self::tube_distance(x, self.s3_distance_to_fixed(&w), self.delta)
            }
            CoverRegion::Ball(i) => {
                let c = self.centers[i].perp();
                Self::tube_distance(x, Self::s3_distance(&w, &c), self.rho)
            }
            CoverRegion::Partner(i) => {
                let y = x.transform_inverse(&self.partners[i]);
                self.distance_to_boundary_set(CoverRegion::Ball(i), &y)
            }
            CoverRegion::Omega => T::infinity(),
        }
    }

    /// Membership of an equator point in `U_δ`, `A_i` or `φ_i(A_i)`.
    pub fn boundary_contains(&self, region: CoverRegion, x: &SpherePoint<T>) -> bool {
        let w = x.perp();
        match region {
            CoverRegion::Fixed => self.has_fixed_set() && self.s3_distance_to_fixed(&w) < self.delta,
            CoverRegion::Ball(i) => Self::s3_distance(&w, &self.centers[i].perp()) < self.rho,
            CoverRegion::Partner(i) => {
                self.boundary_contains(CoverRegion::Ball(i), &x.transform_inverse(&self.partners[i]))
            }
            CoverRegion::Omega => false,
        }
    }

    /// Membership of a hemisphere point in the tube `(·)ᵗ` of a region, or
    /// in `Ω`.
    pub fn interior_contains(&self, region: CoverRegion, x: &SpherePoint<T>) -> bool {
        match region {
            CoverRegion::Omega => x.height() >= self.t,
            _ => self.distance_to_boundary_set(region, x) < self.t,
        }
    }

    /// All regions: `U_δ` (when the fixed set is nonempty), the balls, their
    /// partners and `Ω`.
    pub fn regions(&self) -> Vec<CoverRegion> {
        let mut r = Vec::with_capacity(2 * self.n_balls() + 2);
        if self.has_fixed_set() {
            r.push(CoverRegion::Fixed);
        }
        r.extend((0..self.n_balls()).map(CoverRegion::Ball));
        r.extend((0..self.n_balls()).map(CoverRegion::Partner));
        r.push(CoverRegion::Omega);
        r
    }

    /// Indices of boundary nodes outside `U_δ ∪ ⋃ A_i` (empty for a valid
    /// covering).
    pub fn uncovered_boundary(&self, grid: &QuadratureGrid<T>) -> Vec<usize> {
        grid.boundary_nodes()
            .iter()
            .enumerate()
            .filter(|(_, x)| {
                !self.boundary_contains(CoverRegion::Fixed, x)
                    && !(0..self.n_balls()).any(|i| self.boundary_contains(CoverRegion::Ball(i), x))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Indices of hemisphere nodes outside `Ω ∪ (U_δ)ᵗ ∪ ⋃ (A_i)ᵗ`.
    pub fn uncovered_interior(&self, grid: &QuadratureGrid<T>) -> Vec<usize> {
        grid.hemisphere_nodes()
            .iter()
            .enumerate()
            .filter(|(_, x)| {
                !self.interior_contains(CoverRegion::Omega, x)
                    && !self.interior_contains(CoverRegion::Fixed, x)
                    && !(0..self.n_balls()).any(|i| self.interior_contains(CoverRegion::Ball(i), x))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Lower bound on `dist((A_i)ᵗ, φ_i((A_i)ᵗ))`.
    pub fn separation(&self, i: usize) -> T {
        let p = &self.centers[i];
        p.distance(&p.transform(&self.partners[i])) - T::c(2.0) * (self.rho + self.t)
    }
}

/// Builds the covering on the boundary nodes of `grid`. Centers are chosen
/// by greedy farthest-point selection among nodes outside `U_{δ/2}`, until
/// every node outside `U_δ` lies in a ball; each partner is the group
/// element that displaces its center the most. When a ball cannot be
/// separated from its image, `ρ` shrinks and the construction is retried.
/// Balls are at distance at least `δ` from the fixed set, so for a
/// reflection separation needs `ρ + t < δ`.
pub fn build_covering<T: Real>(
    group: &SymmetryGroup<T>,
    grid: &QuadratureGrid<T>,
    delta: T,
    t: T,
    rho: T,
) -> Result<CoveringConfig<T>> {
    let limit = T::FRAC_PI_4();
    for (name, v) in [("delta", delta), ("t", t), ("rho", rho)] {
        if !(v > T::zero() && v < limit) {
            return Err(Error::Domain {
                what: name,
                value: v.as_f64(),
                domain: "(0, pi/4)",
            });
        }
    }
    let fixed_kind = group.fixed_set_kind();
    let base = CoveringConfig {
        delta,
        t,
        rho,
        eps: T::zero(),
        centers: Vec::new(),
        partners: Vec::new(),
        fixed_kind,
        fixed_projector: group.fixed_projector(),
    };
    let nodes = grid.boundary_nodes();
    let fixed_dist: Vec<T> = nodes.iter().map(|x| base.s3_distance_to_fixed(&x.perp())).collect();
    let targets: Vec<usize> = (0..nodes.len()).filter(|&i| fixed_dist[i] >= delta).collect();
    let half = delta / T::c(2.0);
    if targets.iter().any(|&i| fixed_dist[i] < half) {
        return Err(Error::Covering("target node inside U_{delta/2}".into()));
    }

    let mut rho = rho;
    for _ in 0..MAX_SHRINKS {
        let mut cov = CoveringConfig { rho, t, ..base.clone() };
        // Distance of each target to the nearest chosen center.
        let mut nearest = vec![T::infinity(); targets.len()];
        loop {
            let (far, &d) = match nearest
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
            {
                Some(v) => v,
                None => break,
            };
            if d < rho {
                break;
            }
            let p = nodes[targets[far]];
            for (k, &j) in targets.iter().enumerate() {
                nearest[k] = nearest[k].min(p.distance(&nodes[j]));
            }
            let partner = group
                .elements()
                .iter()
                .max_by(|a, b| {
                    let da = p.distance(&p.transform(a));
                    let db = p.distance(&p.transform(b));
                    da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
                })
                .copied()
                .ok_or_else(|| Error::Covering("empty group".into()))?;
            cov.centers.push(p);
            cov.partners.push(partner);
        }
        let min_sep = (0..cov.n_balls()).map(|i| cov.separation(i)).fold(T::infinity(), T::min);
        if min_sep > T::zero() {
            cov.eps = T::c(0.5) * min_sep.min(t);
            return Ok(cov);
        }
        rho = rho * T::c(SHRINK);
    }
    Err(Error::Covering(format!(
        "no separated covering after {MAX_SHRINKS} shrink steps (rho = {:.3e})",
        rho.as_f64()
    )))
}

fn norm4<T: Real>(w: &[T; 4]) -> T {
    w.iter().fold(T::zero(), |a, &v| a + v * v).sqrt()
}
