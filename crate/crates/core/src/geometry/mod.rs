//! Discretisation of the hemisphere and its boundary, symmetry groups, and
//! the group-adapted covering of the equator.

pub mod average;
pub mod covering;
pub mod export;
pub mod grid;
pub mod group;
pub mod point;
pub mod quadrature;

pub use average::{group_average, GridAction};
pub use covering::{build_covering, CoverRegion, CoveringConfig, DEFAULT_DELTA, DEFAULT_RHO, DEFAULT_T};
pub use grid::{QuadratureGrid, Sphere3Rule};
pub use group::{FixedSetKind, Generator, Mat5, SymmetryGroup};
pub use point::SpherePoint;
pub use export::{grid_hash, write_covering_csv, write_grid_csv};
