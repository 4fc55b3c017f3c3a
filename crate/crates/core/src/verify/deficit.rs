//! Moser–Trudinger deficits: global interior and boundary versions and the
//! localised versions on covering regions, plus bubble sweeps.

use std::io::Write;

use crate::energy::mean_value;
use crate::error::{Error, Result};
use crate::geometry::{CoverRegion, CoveringConfig, SpherePoint};
use crate::scalar::Real;
use crate::spectral::{apply_neg_laplacian, project_cutoff, quadratic_form, HarmonicBasis, SpectralField};
use crate::verify::bubble::{bubble_field, BubbleSpec, ZonalBubble};

/// `log Σ w_i e^{p u_i}` over the masked nodes, or `None` if none is masked.
fn log_integral<T: Real>(w: &[T], u: &[T], p: T, mask: impl Fn(usize) -> bool) -> Option<T> {
    let idx: Vec<usize> = (0..u.len()).filter(|&i| mask(i)).collect();
    let m = idx.iter().fold(T::neg_infinity(), |m, &i| m.max(p * u[i]));
    if idx.is_empty() {
        return None;
    }
    let s = idx.iter().fold(T::zero(), |s, &i| s + w[i] * (p * u[i] - m).exp());
    Some(m + s.ln())
}

/// `D(u) = log∫_{S⁴₊} e^{4(u−ū)} − (scale/4π²)·⟨Pu, u⟩`; `scale = 1` is the
/// sharp constant.
pub fn mt_deficit_interior_scaled<T: Real>(basis: &HarmonicBasis<T>, u: &SpectralField<T>, scale: T) -> T {
    let g = basis.grid();
    let uh = basis.synth_hemisphere(&u.coefficients);
    let li = log_integral(g.hemisphere_weights(), &uh, T::c(4.0), |_| true).unwrap_or(T::neg_infinity());
    li - T::c(4.0) * mean_value(basis, u) - scale * quadratic_form(basis, u) / T::four_pi_sq()
}

pub fn mt_deficit_interior<T: Real>(basis: &HarmonicBasis<T>, u: &SpectralField<T>) -> T {
    mt_deficit_interior_scaled(basis, u, T::one())
}

/// `D∂(u) = log∮_{S³} e^{3(u−ū)} − (3·scale/16π²)·⟨Pu, u⟩`, with `ū` the
/// hemisphere mean.
pub fn mt_deficit_boundary_scaled<T: Real>(basis: &HarmonicBasis<T>, u: &SpectralField<T>, scale: T) -> T {
    let g = basis.grid();
    let ub = basis.synth_boundary(&u.coefficients);
    let li = log_integral(g.boundary_weights(), &ub, T::c(3.0), |_| true).unwrap_or(T::neg_infinity());
    li - T::c(3.0) * mean_value(basis, u)
        - T::c(3.0) * scale * quadratic_form(basis, u) / (T::c(4.0) * T::four_pi_sq())
}

pub fn mt_deficit_boundary<T: Real>(basis: &HarmonicBasis<T>, u: &SpectralField<T>) -> T {
    mt_deficit_boundary_scaled(basis, u, T::one())
}

/// Constant in front of the localised quadratic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantKind {
    /// Regions away from the equator, `1/8π²`.
    Interior,
    /// Tubes touching the equator, `1/4π²`.
    Touching,
    /// Boundary integrals `∮_A e^{3u}`, `3/16π²`.
    Boundary,
}

impl ConstantKind {
    pub fn value<T: Real>(self) -> T {
        let fp = T::four_pi_sq();
        match self {
            ConstantKind::Interior => T::one() / (T::c(2.0) * fp),
            ConstantKind::Touching => T::one() / fp,
            ConstantKind::Boundary => T::c(3.0) / (T::c(4.0) * fp),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConstantKind::Interior => "interior",
            ConstantKind::Touching => "touching",
            ConstantKind::Boundary => "boundary",
        }
    }
}

/// Membership in the region enlarged by `margin` (the `δ`-neighbourhood of
/// the local inequalities). For the boundary kind the enlarged set is the
/// tube of height `margin` over the boundary region.
fn in_enlarged<T: Real>(cov: &CoveringConfig<T>, region: CoverRegion, kind: ConstantKind, x: &SpherePoint<T>, margin: T) -> bool {
    match (kind, region) {
        (_, CoverRegion::Omega) => x.height() >= cov.t - margin,
        (ConstantKind::Boundary, r) => cov.distance_to_boundary_set(r, x) < margin,
        (_, r) => cov.distance_to_boundary_set(r, x) < cov.t + margin,
    }
}

/// Localised deficit
/// `log∫_R e^{4(u−ū)} − κ ∫_{R⁺} ((Δu†)² + 2|∇u†|²) − ε⟨Pu, u⟩`
/// where `u†` is the part of `u` above the cutoff `lambda`, `R⁺` is `R`
/// enlarged by the covering's `eps`, and `κ` comes from `kind`. For the
/// boundary kind the first term is `log∮_{R∩S³} e^{3(u−ū)}`. Subtracting
/// the hemisphere mean `ū` makes the deficit invariant under constants, as
/// the right-hand side is.
pub fn mt_deficit_local<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    cov: &CoveringConfig<T>,
    region: CoverRegion,
    kind: ConstantKind,
    lambda: T,
    eps: T,
) -> Result<T> {
    if !(eps > T::zero()) {
        return Err(Error::Domain {
            what: "eps",
            value: eps.as_f64(),
            domain: "(0, inf)",
        });
    }
    let g = basis.grid();
    let hemi = g.hemisphere_nodes();
    let lhs = match kind {
        ConstantKind::Boundary => {
            let nodes = g.boundary_nodes();
            let ub = basis.synth_boundary(&u.coefficients);
            log_integral(g.boundary_weights(), &ub, T::c(3.0), |i| cov.boundary_contains(region, &nodes[i]))
        }
        _ => {
            let uh = basis.synth_hemisphere(&u.coefficients);
            log_integral(g.hemisphere_weights(), &uh, T::c(4.0), |i| cov.interior_contains(region, &hemi[i]))
        }
    };
    let power = if kind == ConstantKind::Boundary { T::c(3.0) } else { T::c(4.0) };
    let lhs = lhs.ok_or_else(|| Error::Domain {
        what: "region node count",
        value: 0.0,
        domain: "at least one node",
    })? - power * mean_value(basis, u);

    let (_, high) = project_cutoff(basis, u, lambda)?;
    let lap = basis.synth_hemisphere(&apply_neg_laplacian(basis, &high).coefficients);
    let grad = basis.gradient_sq_hemisphere(&high.coefficients);
    let w = g.hemisphere_weights();
    let local = hemi
        .iter()
        .enumerate()
        .filter(|(_, x)| in_enlarged(cov, region, kind, x, cov.eps))
        .fold(T::zero(), |s, (i, _)| s + w[i] * (lap[i] * lap[i] + T::c(2.0) * grad[i]));
    Ok(lhs - kind.value::<T>() * local - eps * quadratic_form(basis, u))
}

/// One deficit value of a sweep.
#[derive(Debug, Clone)]
pub struct DeficitRow {
    pub lambda: f64,
    pub deficit: f64,
    pub variant: String,
    pub region: String,
}

/// Standard sweep `λ_c = 1, 2, 4, …, 256`.
pub fn standard_lambdas() -> Vec<f64> {
    (0..=8).map(|e| (1u32 << e) as f64).collect()
}

/// Global deficits along the equator-centered bubble family: the projected
/// field (`projected`), the one-dimensional quadrature of the exact bubble
/// (`exact`), each with the sharp constant and with `probe_scale` times it
/// (`…-probe`).
pub fn global_deficit_sweep<T: Real>(
    basis: &HarmonicBasis<T>,
    center: SpherePoint<T>,
    lambdas: &[f64],
    probe_scale: T,
) -> Result<Vec<DeficitRow>> {
    let mut rows = Vec::new();
    let mut push = |lambda: f64, deficit: T, variant: &str, region: &str| {
        rows.push(DeficitRow {
            lambda,
            deficit: deficit.as_f64(),
            variant: variant.to_string(),
            region: region.to_string(),
        })
    };
    for &lam in lambdas {
        let spec = BubbleSpec::new(center, T::c(lam))?;
        let u = bubble_field(basis, &spec)?;
        push(lam, mt_deficit_interior(basis, &u), "projected", "interior");
        push(lam, mt_deficit_boundary(basis, &u), "projected", "boundary");
        push(lam, mt_deficit_interior_scaled(basis, &u, probe_scale), "projected-probe", "interior");
        push(lam, mt_deficit_boundary_scaled(basis, &u, probe_scale), "projected-probe", "boundary");
        let z = ZonalBubble::new(T::c(lam))?;
        push(lam, z.interior_deficit(T::one()), "exact", "interior");
        push(lam, z.boundary_deficit(T::one()), "exact", "boundary");
        push(lam, z.interior_deficit(probe_scale), "exact-probe", "interior");
        push(lam, z.boundary_deficit(probe_scale), "exact-probe", "boundary");
    }
    Ok(rows)
}

/// Cutoffs used by the local sweeps: `ν_1`, `ν_3`, `ν_5`.
pub fn local_cutoffs<T: Real>() -> Vec<T> {
    [1usize, 3, 5].iter().map(|&k| crate::spectral::eigen_paneitz(k)).collect()
}

/// Local deficits for bubbles centered at `center`, for every cutoff in
/// `cutoffs`. The variant column records kind and cutoff.
#[allow(clippy::too_many_arguments)]
pub fn local_deficit_sweep<T: Real>(
    basis: &HarmonicBasis<T>,
    cov: &CoveringConfig<T>,
    region: CoverRegion,
    kind: ConstantKind,
    center: SpherePoint<T>,
    lambdas: &[f64],
    cutoffs: &[T],
    eps: T,
) -> Result<Vec<DeficitRow>> {
    let mut rows = Vec::new();
    for &lam in lambdas {
        let u = bubble_field(basis, &BubbleSpec::new(center, T::c(lam))?)?;
        for &cut in cutoffs {
            rows.push(DeficitRow {
                lambda: lam,
                deficit: mt_deficit_local(basis, &u, cov, region, kind, cut, eps)?.as_f64(),
                variant: format!("local-{}-cut{}", kind.as_str(), cut.as_f64()),
                region: region_label(region),
            });
        }
    }
    Ok(rows)
}

pub fn region_label(r: CoverRegion) -> String {
    match r {
        CoverRegion::Fixed => "fixed".into(),
        CoverRegion::Ball(i) => format!("ball{i}"),
        CoverRegion::Partner(i) => format!("partner{i}"),
        CoverRegion::Omega => "omega".into(),
    }
}

/// CSV with columns `lambda_c,deficit,variant,region`.
pub fn write_deficit_csv<W: Write>(rows: &[DeficitRow], comments: &[String], mut out: W) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "lambda_c,deficit,variant,region")?;
    for r in rows {
        writeln!(out, "{},{:e},{},{}", r.lambda, r.deficit, r.variant, r.region)?;
    }
    Ok(())
}
