//! Distribution of the curvature masses `Q e^{4u}` and `T e^{3u}` over the
//! covering regions, and the resulting case of the mass alternative.

use std::fmt;

use crate::energy::CurvaturePair;
use crate::error::{Error, Integral, Result};
use crate::geometry::{CoverRegion, CoveringConfig, QuadratureGrid};
use crate::scalar::Real;
use crate::spectral::{HarmonicBasis, SpectralField};

/// Fractions may exceed 1 by this much through rounding.
pub const OVERLAP_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InteriorCase {
    /// Mass near the fixed set: `(U_δ)ᵗ`.
    I,
    /// Mass in a tube `(A_i)ᵗ` (and, by symmetry, in its partner).
    II(usize),
    /// Mass in `Ω`, away from the equator.
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCase {
    /// Boundary mass near the fixed set: `U_δ`.
    A,
    /// Boundary mass in a ball `A_i`.
    B(usize),
}

impl fmt::Display for InteriorCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InteriorCase::I => write!(f, "i"),
            InteriorCase::II(_) => write!(f, "ii"),
            InteriorCase::III => write!(f, "iii"),
        }
    }
}

impl fmt::Display for BoundaryCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCase::A => write!(f, "a"),
            BoundaryCase::B(_) => write!(f, "b"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MassReport<T> {
    /// Fraction of `∫_{S⁴₊} Q e^{4u}` in each tube region and `Ω`.
    pub interior: Vec<(CoverRegion, T)>,
    /// Fraction of `∮ T e^{3u}` in `U_δ`, each ball and each partner.
    pub boundary: Vec<(CoverRegion, T)>,
    /// `1/(2+N)`.
    pub gamma_interior: T,
    /// `1/(1+N)`.
    pub gamma_boundary: T,
    pub interior_case: InteriorCase,
    pub boundary_case: BoundaryCase,
    /// Every case whose fraction meets the threshold, in selection order.
    pub interior_triggered: Vec<InteriorCase>,
    pub boundary_triggered: Vec<BoundaryCase>,
}

impl<T: Real> MassReport<T> {
    fn lookup(list: &[(CoverRegion, T)], r: CoverRegion) -> T {
        list.iter().find(|(q, _)| *q == r).map_or(T::zero(), |&(_, v)| v)
    }

    pub fn interior_fraction(&self, r: CoverRegion) -> T {
        Self::lookup(&self.interior, r)
    }

    pub fn boundary_fraction(&self, r: CoverRegion) -> T {
        Self::lookup(&self.boundary, r)
    }

    pub fn interior_case_fraction(&self, c: InteriorCase) -> T {
        match c {
            InteriorCase::I => self.interior_fraction(CoverRegion::Fixed),
            InteriorCase::II(i) => self.interior_fraction(CoverRegion::Ball(i)),
            InteriorCase::III => self.interior_fraction(CoverRegion::Omega),
        }
    }

    pub fn boundary_case_fraction(&self, c: BoundaryCase) -> T {
        match c {
            BoundaryCase::A => self.boundary_fraction(CoverRegion::Fixed),
            BoundaryCase::B(i) => self.boundary_fraction(CoverRegion::Ball(i)),
        }
    }

    /// Largest mass difference between a ball (tube) and its partner.
    pub fn pair_defect(&self) -> T {
        let mut d = T::zero();
        for list in [&self.interior, &self.boundary] {
            for &(r, v) in list.iter() {
                if let CoverRegion::Ball(i) = r {
                    d = d.max((v - Self::lookup(list, CoverRegion::Partner(i))).abs());
                }
            }
        }
        d
    }
}

fn fractions<T: Real>(
    w: &[T],
    dens: &[T],
    regions: &[CoverRegion],
    regions_at: impl Fn(usize) -> Vec<CoverRegion>,
    which: Integral,
) -> Result<Vec<(CoverRegion, T)>> {
    let total = w.iter().zip(dens).fold(T::zero(), |s, (&a, &b)| s + a * b);
    if !(total > T::zero()) {
        return Err(Error::Admissibility { integral: which, value: total.as_f64() });
    }
    let slot = |r: CoverRegion| regions.iter().position(|q| *q == r);
    let mut mass = vec![T::zero(); regions.len()];
    for i in 0..dens.len() {
        for r in regions_at(i) {
            if let Some(k) = slot(r) {
                mass[k] = mass[k] + w[i] * dens[i];
            }
        }
    }
    Ok(regions.iter().zip(mass).map(|(&r, m)| (r, m / total)).collect())
}

/// Mass report from samples of `u` at the hemisphere and boundary nodes.
///
/// Cases are tried in the order (iii), (ii), (i) in the interior and (b),
/// (a) on the boundary, and the first whose fraction reaches `γ` is
/// selected: the fixed-set cases are reported only when no other region
/// holds a share `γ`, i.e. when the mass sits near the fixed set. For (ii)
/// and (b) the heaviest ball is the candidate. The regions number `N + 2` (resp. `N + 1`) and cover
/// everything, so some case always triggers.
pub fn mass_distribution_samples<T: Real>(
    grid: &QuadratureGrid<T>,
    u_hemisphere: &[T],
    u_boundary: &[T],
    curv: &CurvaturePair<T>,
    cov: &CoveringConfig<T>,
) -> Result<MassReport<T>> {
    let n = cov.n_balls();
    let regions: Vec<CoverRegion> = cov.regions();
    let hemi = grid.hemisphere_nodes();
    let bnd = grid.boundary_nodes();
    let pc = cov.partner_centers();
    let dq: Vec<T> = curv.q.iter().zip(u_hemisphere).map(|(&q, &v)| q * (T::c(4.0) * v).exp()).collect();
    let dt: Vec<T> = curv.t.iter().zip(u_boundary).map(|(&t, &v)| t * (T::c(3.0) * v).exp()).collect();
    let interior = fractions(
        grid.hemisphere_weights(),
        &dq,
        &regions,
        |i| cov.regions_at(&hemi[i], true, &pc),
        Integral::Interior,
    )?;
    let b_regions: Vec<CoverRegion> = regions.iter().copied().filter(|r| *r != CoverRegion::Omega).collect();
    let boundary = fractions(
        grid.boundary_weights(),
        &dt,
        &b_regions,
        |i| cov.regions_at(&bnd[i], false, &pc),
        Integral::Boundary,
    )?;

    let gamma_interior = T::one() / T::from_usize_lossy(n + 2);
    let gamma_boundary = T::one() / T::from_usize_lossy(n + 1);
    let best_ball = |list: &[(CoverRegion, T)]| {
        list.iter()
            .filter_map(|&(r, v)| match r {
                CoverRegion::Ball(i) => Some((i, v)),
                _ => None,
            })
            .fold(None, |acc: Option<(usize, T)>, (i, v)| match acc {
                Some((_, b)) if b >= v => acc,
                _ => Some((i, v)),
            })
    };
    let mut report = MassReport {
        interior,
        boundary,
        gamma_interior,
        gamma_boundary,
        interior_case: InteriorCase::I,
        boundary_case: BoundaryCase::A,
        interior_triggered: Vec::new(),
        boundary_triggered: Vec::new(),
    };
    let mut ic = vec![InteriorCase::III];
    if let Some((i, _)) = best_ball(&report.interior) {
        ic.push(InteriorCase::II(i));
    }
    ic.push(InteriorCase::I);
    report.interior_triggered = ic
        .into_iter()
        .filter(|&c| report.interior_case_fraction(c) >= gamma_interior)
        .collect();
    let mut bc = Vec::new();
    if let Some((i, _)) = best_ball(&report.boundary) {
        bc.push(BoundaryCase::B(i));
    }
    bc.push(BoundaryCase::A);
    report.boundary_triggered = bc
        .into_iter()
        .filter(|&c| report.boundary_case_fraction(c) >= gamma_boundary)
        .collect();
    report.interior_case = *report.interior_triggered.first().ok_or_else(|| {
        Error::Covering("no interior region holds the threshold mass; the covering is incomplete".into())
    })?;
    report.boundary_case = *report.boundary_triggered.first().ok_or_else(|| {
        Error::Covering("no boundary region holds the threshold mass; the covering is incomplete".into())
    })?;
    Ok(report)
}

/// Mass report of a spectral field.
pub fn mass_distribution<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    curv: &CurvaturePair<T>,
    cov: &CoveringConfig<T>,
) -> Result<MassReport<T>> {
    let uh = basis.synth_hemisphere(&u.coefficients);
    let ub = basis.synth_boundary(&u.coefficients);
    mass_distribution_samples(basis.grid(), &uh, &ub, curv, cov)
}

/// CSV with columns `region,domain,fraction`, followed by comment lines
/// holding the thresholds and the selected cases.
pub fn write_mass_csv<T: Real, W: std::io::Write>(report: &MassReport<T>, comments: &[String], mut out: W) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(
        out,
        "# gamma_interior={:e} gamma_boundary={:e} interior_case={} boundary_case={}",
        report.gamma_interior.as_f64(),
        report.gamma_boundary.as_f64(),
        report.interior_case,
        report.boundary_case
    )?;
    writeln!(out, "region,domain,fraction")?;
    for (list, dom) in [(&report.interior, "interior"), (&report.boundary, "boundary")] {
        for (r, v) in list.iter() {
            writeln!(out, "{},{dom},{:e}", crate::verify::deficit::region_label(*r), v.as_f64())?;
        }
    }
    Ok(())
}
