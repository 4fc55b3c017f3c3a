//! Gauss–Bonnet–Chern defect and interior residuals of the curvature
//! equation.

use crate::energy::{exp_integrals, CurvaturePair};
use crate::scalar::Real;
use crate::spectral::{apply_operator, HarmonicBasis, SpectralField};

/// `|∫_{S⁴₊} Q e^{4u} + ∮_{S³} T e^{3u} − 4π²|`.
pub fn check_gbc<T: Real>(basis: &HarmonicBasis<T>, u: &SpectralField<T>, curv: &CurvaturePair<T>) -> T {
    let (iq, it) = exp_integrals(basis, u, curv);
    (iq + it - T::four_pi_sq()).abs()
}

/// Samples of `Δ²u − 2Δu + 6 − 2Q e^{4u}` at the hemisphere nodes.
pub fn interior_residual_samples<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    curv: &CurvaturePair<T>,
) -> Vec<T> {
    let pu = basis.synth_hemisphere(&apply_operator(basis, u).coefficients);
    let uh = basis.synth_hemisphere(&u.coefficients);
    pu.iter()
        .zip(&uh)
        .zip(&curv.q)
        .map(|((&p, &v), &q)| p + T::c(6.0) - T::c(2.0) * q * (T::c(4.0) * v).exp())
        .collect()
}

fn max_away_from_equator<T: Real>(basis: &HarmonicBasis<T>, r: &[T], margin: T) -> T {
    basis
        .grid()
        .hemisphere_nodes()
        .iter()
        .zip(r)
        .filter(|(x, _)| x.height() > margin)
        .fold(T::zero(), |m, (_, v)| m.max(v.abs()))
}

/// Largest `|Δ²u − 2Δu + 6 − 2Q e^{4u}|` over hemisphere nodes farther than
/// `margin` from the equator, with the operator applied spectrally.
pub fn residual_interior<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    curv: &CurvaturePair<T>,
    margin: T,
) -> T {
    max_away_from_equator(basis, &interior_residual_samples(basis, u, curv), margin)
}

/// Interior residual with the boundary layer removed.
///
/// Even modes have `∂_ν Δ Y = 0` on the equator, so a Galerkin solution
/// carries the boundary condition `−∂_ν Δu = 2T e^{3u}` as a layer whose
/// truncated expansion `Σ_j b_j Y_j`, `b_j = 4∮ T e^{3u} Y_j`, also shows up
/// in the interior. This subtracts that expansion; what remains is the
/// gradient of the energy (as a field) plus the truncation error of
/// `Q e^{4u}`.
pub fn residual_interior_layer_free<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    curv: &CurvaturePair<T>,
    margin: T,
) -> T {
    let r = interior_residual_samples(basis, u, curv);
    let ub = basis.synth_boundary(&u.coefficients);
    let flux: Vec<T> = curv
        .t
        .iter()
        .zip(&ub)
        .map(|(&t, &v)| T::c(4.0) * t * (T::c(3.0) * v).exp())
        .collect();
    let b = basis.integrate_boundary(&flux);
    let layer = basis.synth_hemisphere(&b);
    let comp: Vec<T> = r.iter().zip(&layer).map(|(&a, &l)| a - l).collect();
    max_away_from_equator(basis, &comp, margin)
}
