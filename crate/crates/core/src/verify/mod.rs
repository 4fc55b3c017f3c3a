//! Numerical checks: curvature identities, residuals, Moser–Trudinger
//! deficits along bubble families, and the covering mass alternative.

pub mod bubble;
pub mod deficit;
pub mod mass;
pub mod residual;

pub use bubble::{bubble, bubble_field, bubble_profile, BubbleSpec, ZonalBubble};
pub use deficit::{
    global_deficit_sweep, local_cutoffs, local_deficit_sweep, mt_deficit_boundary, mt_deficit_boundary_scaled,
    mt_deficit_interior, mt_deficit_interior_scaled, mt_deficit_local, region_label, standard_lambdas, write_deficit_csv,
    ConstantKind, DeficitRow,
};
pub use mass::{mass_distribution, OVERLAP_SLACK, mass_distribution_samples, write_mass_csv, BoundaryCase, InteriorCase, MassReport};
pub use residual::{check_gbc, interior_residual_samples, residual_interior, residual_interior_layer_free};
