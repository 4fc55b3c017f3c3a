//! Variational solver for prescribed Q- and T-curvature on the upper
//! hemisphere `S⁴₊`, with a spectral discretisation by even spherical
//! harmonics and a suite of numerical checks.

pub mod builtins;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod scalar;
pub mod solver;
pub mod spectral;
pub mod verify;

pub use error::{Error, Integral, Result};
pub use scalar::Real;

/// `f64` instantiations of the generic types.
pub type Point = geometry::SpherePoint<f64>;
pub type Grid = geometry::QuadratureGrid<f64>;
pub type Group = geometry::SymmetryGroup<f64>;
pub type Covering = geometry::CoveringConfig<f64>;
pub type Basis = spectral::HarmonicBasis<f64>;
pub type Field = spectral::SpectralField<f64>;
pub type Curvature = energy::CurvaturePair<f64>;
pub type Solver<'a> = solver::SymmetricSolver<'a, f64>;
pub type Mass = verify::MassReport<f64>;
