//! Coefficient vectors over a [`HarmonicBasis`] and the operations on them.

use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::SpherePoint;
use crate::scalar::Real;
use crate::spectral::basis::{eigen_laplace, eigen_paneitz, HarmonicBasis};

/// Tolerance for the parity check in [`analyze`], relative to the sample
/// magnitude.
pub const PARITY_TOL: f64 = 1e-9;

/// An even field `u = Σ c_j Y_j` on S⁴, i.e. a Neumann field on `S⁴₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T> {
    pub coefficients: Vec<T>,
}

impl<T: Real> SpectralField<T> {
    pub fn zeros(n: usize) -> Self {
        Self { coefficients: vec![T::zero(); n] }
    }

    pub fn from_coefficients(coefficients: Vec<T>) -> Self {
        Self { coefficients }
    }

    /// The constant field `value`.
    pub fn constant(basis: &HarmonicBasis<T>, value: T) -> Self {
        let mut f = Self::zeros(basis.len());
        f.coefficients[0] = value / basis.constant_mode_value();
        f
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_finite())
    }

    /// Adds a constant function (shifts the degree-0 coefficient).
    pub fn add_constant(&self, basis: &HarmonicBasis<T>, c: T) -> Self {
        let mut f = self.clone();
        f.coefficients[0] = f.coefficients[0] + c / basis.constant_mode_value();
        f
    }

    pub fn scaled(&self, s: T) -> Self {
        Self::from_coefficients(self.coefficients.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_coefficients(
            self.coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }
}

/// Coefficients of full-sphere samples by quadrature. Rejects samples whose
/// odd part exceeds [`PARITY_TOL`].
pub fn analyze<T: Real>(basis: &HarmonicBasis<T>, samples: &[T]) -> Result<SpectralField<T>> {
    basis.check_parity(samples, T::c(PARITY_TOL))?;
    Ok(SpectralField::from_coefficients(
        basis.integrate_rows(samples, 0..basis.grid().n_t()),
    ))
}

/// Coefficients of hemisphere samples, through the even extension.
pub fn analyze_hemisphere<T: Real>(basis: &HarmonicBasis<T>, samples: &[T]) -> Result<SpectralField<T>> {
    let full = basis.grid().even_extend(samples)?;
    analyze(basis, &full)
}

/// Pointwise values `Σ c_j Y_j(x)`.
pub fn synthesize<T: Real>(basis: &HarmonicBasis<T>, field: &SpectralField<T>, points: &[SpherePoint<T>]) -> Vec<T> {
    points
        .iter()
        .map(|x| crate::scalar::dot(&basis.eval_modes(x), &field.coefficients))
        .collect()
}

/// `⟨P^{4,3}u, u⟩` on the hemisphere: half the full-sphere form,
/// `½ Σ ν_k c_j²`.
pub fn quadratic_form<T: Real>(basis: &HarmonicBasis<T>, field: &SpectralField<T>) -> T {
    basis
        .modes()
        .iter()
        .zip(&field.coefficients)
        .fold(T::zero(), |s, (m, &c)| s + eigen_paneitz::<T>(m.k) * c * c)
        * T::c(0.5)
}

/// `Δ² u − 2Δu`, i.e. multiplication by `ν_k`.
pub fn apply_operator<T: Real>(basis: &HarmonicBasis<T>, field: &SpectralField<T>) -> SpectralField<T> {
    SpectralField::from_coefficients(
        basis
            .modes()
            .iter()
            .zip(&field.coefficients)
            .map(|(m, &c)| eigen_paneitz::<T>(m.k) * c)
            .collect(),
    )
}

/// `−Δu`, i.e. multiplication by `μ_k`.
pub fn apply_neg_laplacian<T: Real>(basis: &HarmonicBasis<T>, field: &SpectralField<T>) -> SpectralField<T> {
    SpectralField::from_coefficients(
        basis
            .modes()
            .iter()
            .zip(&field.coefficients)
            .map(|(m, &c)| eigen_laplace::<T>(m.k) * c)
            .collect(),
    )
}

/// Splits `u` into its part in `E_λ` (modes with `ν_k ≤ λ`) and the rest,
/// `u†`.
pub fn project_cutoff<T: Real>(
    basis: &HarmonicBasis<T>,
    field: &SpectralField<T>,
    lambda: T,
) -> Result<(SpectralField<T>, SpectralField<T>)> {
    if !(lambda >= T::zero()) {
        return Err(Error::Domain {
            what: "lambda",
            value: lambda.as_f64(),
            domain: "[0, inf)",
        });
    }
    let mut low = SpectralField::zeros(field.len());
    let mut high = SpectralField::zeros(field.len());
    for (j, m) in basis.modes().iter().enumerate() {
        if eigen_paneitz::<T>(m.k) <= lambda {
            low.coefficients[j] = field.coefficients[j];
        } else {
            high.coefficients[j] = field.coefficients[j];
        }
    }
    Ok((low, high))
}

/// `‖u‖²_{H²(S⁴₊)} = ∫ u² + |∇u|² + (Δu)²` over the hemisphere.
pub fn h2_norm_sq<T: Real>(basis: &HarmonicBasis<T>, field: &SpectralField<T>) -> T {
    basis
        .modes()
        .iter()
        .zip(&field.coefficients)
        .fold(T::zero(), |s, (m, &c)| {
            let mu = eigen_laplace::<T>(m.k);
            s + (T::one() + mu + mu * mu) * c * c
        })
        * T::c(0.5)
}

/// Bounds of `quadratic_form(u) / ‖u‖²_{H²}` over mean-zero fields of
/// degree `≤ max_degree`, attained on single degrees.
pub fn norm_equivalence_bounds<T: Real>(max_degree: usize) -> (T, T) {
    (1..=max_degree).fold((T::infinity(), T::zero()), |(lo, hi), k| {
        let mu = eigen_laplace::<T>(k);
        let r = eigen_paneitz::<T>(k) / (T::one() + mu + mu * mu);
        (lo.min(r), hi.max(r))
    })
}

/// Writes coefficient vectors as CSV with one `k{K}_m{M}` column per mode
/// and one row per field. `comments` become leading `#` lines.
pub fn write_coefficients_csv<T: Real, W: Write>(
    basis: &HarmonicBasis<T>,
    fields: &[SpectralField<T>],
    comments: &[String],
    mut out: W,
) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    let header: Vec<String> = basis.modes().iter().map(|m| m.label()).collect();
    writeln!(out, "{}", header.join(","))?;
    for f in fields {
        let row: Vec<String> = f.coefficients.iter().map(|c| format!("{:e}", c.as_f64())).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
