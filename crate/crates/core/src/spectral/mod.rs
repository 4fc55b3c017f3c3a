//! Even spherical-harmonic discretisation of Neumann fields on `S⁴₊`.

pub mod basis;
pub mod field;
pub mod polynomials;
pub mod symmetry;

pub use basis::{eigen_laplace, eigen_paneitz, HarmonicBasis, Mode};
pub use field::{
    analyze, analyze_hemisphere, apply_neg_laplacian, apply_operator, h2_norm_sq, norm_equivalence_bounds,
    project_cutoff, quadratic_form, synthesize, write_coefficients_csv, SpectralField,
};
pub use symmetry::GroupProjector;
