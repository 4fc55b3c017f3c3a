//! Versioned CSV bundle of the grid and covering, and a checksum of the grid.

use std::io::Write;

use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::geometry::{CoveringConfig, QuadratureGrid};
use crate::scalar::Real;

pub const BUNDLE_VERSION: u32 = 1;

/// SHA-256 over the little-endian `f64` bytes of every node coordinate and
/// weight, interior first, then boundary.
pub fn grid_hash<T: Real>(grid: &QuadratureGrid<T>) -> String {
    let mut h = Sha256::new();
    for (x, w) in grid.interior_nodes().iter().zip(grid.interior_weights()) {
        for c in x.coords() {
            h.update(c.as_f64().to_le_bytes());
        }
        h.update(w.as_f64().to_le_bytes());
    }
    for (x, w) in grid.boundary_nodes().iter().zip(grid.boundary_weights()) {
        for c in x.coords() {
            h.update(c.as_f64().to_le_bytes());
        }
        h.update(w.as_f64().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes nodes and weights: `set,index,x1,x2,x3,x4,x5,weight` with
/// `set ∈ {interior, boundary}`.
pub fn write_grid_csv<T: Real, W: Write>(grid: &QuadratureGrid<T>, comments: &[String], mut out: W) -> Result<()> {
    writeln!(out, "# qtcurv grid bundle v{BUNDLE_VERSION}")?;
    writeln!(out, "# resolution {}", grid.resolution())?;
    writeln!(out, "# hash {}", grid_hash(grid))?;
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "set,index,x1,x2,x3,x4,x5,weight")?;
    let sets = [
        ("interior", grid.interior_nodes(), grid.interior_weights()),
        ("boundary", grid.boundary_nodes(), grid.boundary_weights()),
    ];
    for (name, nodes, weights) in sets {
        for (i, (x, w)) in nodes.iter().zip(weights).enumerate() {
            let c = x.coords();
            writeln!(
                out,
                "{name},{i},{:e},{:e},{:e},{:e},{:e},{:e}",
                c[0].as_f64(),
                c[1].as_f64(),
                c[2].as_f64(),
                c[3].as_f64(),
                c[4].as_f64(),
                w.as_f64()
            )?;
        }
    }
    Ok(())
}

/// Writes the covering: one `fixed` row with `δ, t, ρ, ε`, then one row per
/// ball with its center and the partner's 4×4 block (row-major).
pub fn write_covering_csv<T: Real, W: Write>(cov: &CoveringConfig<T>, comments: &[String], mut out: W) -> Result<()> {
    writeln!(out, "# qtcurv covering bundle v{BUNDLE_VERSION}")?;
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(
        out,
        "# delta {:e} t {:e} rho {:e} eps {:e} fixed_set {}",
        cov.delta.as_f64(),
        cov.t.as_f64(),
        cov.rho.as_f64(),
        cov.eps.as_f64(),
        cov.fixed_kind
    )?;
    let mut header = vec!["ball".to_string(), "x1".into(), "x2".into(), "x3".into(), "x4".into()];
    for r in 1..=4 {
        for c in 1..=4 {
            header.push(format!("g{r}{c}"));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for (i, (p, g)) in cov.centers.iter().zip(&cov.partners).enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(p.perp().iter().map(|v| format!("{:e}", v.as_f64())));
        for r in g.iter().take(4) {
            row.extend(r.iter().take(4).map(|v| format!("{:e}", v.as_f64())));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
