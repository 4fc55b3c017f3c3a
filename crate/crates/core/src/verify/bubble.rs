//! Conformal bubbles: the log-conformal factors of Möbius dilations of S⁴.

use crate::error::{Error, Result};
use crate::geometry::quadrature::gauss_legendre_on;
use crate::geometry::{QuadratureGrid, SpherePoint};
use crate::scalar::Real;
use crate::spectral::{analyze, HarmonicBasis, SpectralField};

#[derive(Debug, Clone, Copy)]
pub struct BubbleSpec<T> {
    /// Concentration point, on the equator or in the open hemisphere.
    pub center: SpherePoint<T>,
    /// Dilation factor `λ ≥ 1`.
    pub lambda: T,
}

impl<T: Real> BubbleSpec<T> {
    pub fn new(center: SpherePoint<T>, lambda: T) -> Result<Self> {
        if !(lambda >= T::one()) {
            return Err(Error::Domain {
                what: "lambda",
                value: lambda.as_f64(),
                domain: "[1, inf)",
            });
        }
        if center.x5() < T::zero() {
            return Err(Error::Domain {
                what: "bubble center height",
                value: center.x5().as_f64(),
                domain: "[0, 1]",
            });
        }
        Ok(Self { center, lambda })
    }

    /// `u_λ(x) = log(2λ / ((1 + x·p) + λ²(1 − x·p)))`, so that `e^{4u_λ}` is
    /// the volume Jacobian of the dilation and `∫_{S⁴} e^{4u_λ} = 8π²/3`.
    pub fn value(&self, x: &SpherePoint<T>) -> T {
        bubble_profile(self.lambda, x.dot(&self.center))
    }

    /// Value of the even extension of the hemisphere restriction: `x` is
    /// reflected into `x₅ ≥ 0` first. Agrees with [`Self::value`] for
    /// equator centers.
    pub fn even_value(&self, x: &SpherePoint<T>) -> T {
        if x.x5() < T::zero() {
            self.value(&x.reflect())
        } else {
            self.value(x)
        }
    }
}

/// Bubble profile as a function of `s = x·p`.
pub fn bubble_profile<T: Real>(lambda: T, s: T) -> T {
    let two = T::c(2.0);
    let a = (T::one() + s) + lambda * lambda * (T::one() - s);
    (two * lambda / a).ln()
}

/// Samples of the (evenly extended) bubble at every interior node.
pub fn bubble<T: Real>(spec: &BubbleSpec<T>, grid: &QuadratureGrid<T>) -> Vec<T> {
    grid.interior_nodes().iter().map(|x| spec.even_value(x)).collect()
}

/// Projection of the bubble onto the basis.
pub fn bubble_field<T: Real>(basis: &HarmonicBasis<T>, spec: &BubbleSpec<T>) -> Result<SpectralField<T>> {
    analyze(basis, &bubble(spec, basis.grid()))
}

/// Panelled Gauss–Legendre rule on `[0, π]` in the polar angle around the
/// bubble center, graded towards `θ = 0` at the scale `1/λ`.
pub(crate) fn zonal_rule<T: Real>(lambda: T) -> (Vec<T>, Vec<T>) {
    let pi = T::PI();
    let mut cuts = vec![T::zero()];
    let mut b = T::c(0.125) / lambda;
    while b < pi {
        cuts.push(b);
        b = b * T::c(2.0);
    }
    cuts.push(pi);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in cuts.windows(2) {
        let (x, q) = gauss_legendre_on(24, w[0], w[1]);
        nodes.extend(x);
        weights.extend(q);
    }
    (nodes, weights)
}

/// Integrals of an equator-centered bubble by one-dimensional quadrature in
/// the angle from its center, independent of the grid and the basis.
#[derive(Debug, Clone, Copy)]
pub struct ZonalBubble<T> {
    pub lambda: T,
    /// `∫_{S⁴} e^{4u}`.
    pub sphere_exp: T,
    /// `∮_{S³} e^{3u}`.
    pub equator_exp: T,
    /// Mean of `u` over S⁴ (equal to the hemisphere mean by evenness).
    pub mean: T,
    /// `∫_{S⁴₊} (Δu)² + 2|∇u|²`, half the full-sphere value.
    pub quadratic_form: T,
}

impl<T: Real> ZonalBubble<T> {
    pub fn new(lambda: T) -> Result<Self> {
        BubbleSpec::new(SpherePoint::on_equator([T::one(), T::zero(), T::zero(), T::zero()]), lambda)?;
        let (th, w) = zonal_rule(lambda);
        let l2m1 = lambda * lambda - T::one();
        let vol_s3 = crate::scalar::vol_s3::<T>();
        let four_pi = T::c(4.0) * T::PI();
        let (mut e4, mut e3, mut mean, mut form) = (T::zero(), T::zero(), T::zero(), T::zero());
        for (&t, &wt) in th.iter().zip(&w) {
            let (s, c) = t.sin_cos();
            let u = bubble_profile(lambda, c);
            // A(θ) = (1+λ²) + (1−λ²) cos θ and u = log 2λ − log A.
            let a = (T::one() + lambda * lambda) - l2m1 * c;
            let da = l2m1 * s;
            let dda = l2m1 * c;
            let du = -da / a;
            let ddu = -dda / a + (da / a) * (da / a);
            let lap = ddu + T::c(3.0) * c / s * du;
            let s3 = s * s * s;
            e4 = e4 + wt * s3 * (T::c(4.0) * u).exp();
            e3 = e3 + wt * s * s * (T::c(3.0) * u).exp();
            mean = mean + wt * s3 * u;
            form = form + wt * s3 * (lap * lap + T::c(2.0) * du * du);
        }
        Ok(Self {
            lambda,
            sphere_exp: vol_s3 * e4,
            equator_exp: four_pi * e3,
            mean: vol_s3 * mean / crate::scalar::vol_s4::<T>(),
            quadratic_form: T::c(0.5) * vol_s3 * form,
        })
    }

    /// `log∫_{S⁴₊} e^{4(u−ū)} − κ·form` with `κ = scale/4π²`.
    pub fn interior_deficit(&self, scale: T) -> T {
        (T::c(0.5) * self.sphere_exp).ln() - T::c(4.0) * self.mean
            - scale * self.quadratic_form / T::four_pi_sq()
    }

    /// `log∮_{S³} e^{3(u−ū)} − κ·form` with `κ = 3·scale/16π²`.
    pub fn boundary_deficit(&self, scale: T) -> T {
        self.equator_exp.ln() - T::c(3.0) * self.mean
            - T::c(3.0) * scale * self.quadratic_form / (T::c(4.0) * T::four_pi_sq())
    }
}
