//! Curvature sample files: `set,index,value` rows with `set ∈ {q, t}`,
//! `q` at hemisphere nodes and `t` at boundary nodes, behind a
//! `# hash <grid hash>` header line.

use std::io::Write;
use std::path::Path;

use qtcurv::energy::CurvaturePair;
use qtcurv::geometry::{grid_hash, group_average, GridAction};
use qtcurv::{Basis, Group};

use crate::CliError;

/// Larger changes from the group average trigger a warning.
pub const INVARIANCE_WARN: f64 = 1e-6;

pub fn write_samples<W: Write>(basis: &Basis, curv: &CurvaturePair<f64>, comments: &[String], mut out: W) -> Result<(), CliError> {
    writeln!(out, "# hash {}", grid_hash(basis.grid()))?;
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "set,index,value")?;
    for (i, v) in curv.q.iter().enumerate() {
        writeln!(out, "q,{i},{v:e}")?;
    }
    for (i, v) in curv.t.iter().enumerate() {
        writeln!(out, "t,{i},{v:e}")?;
    }
    Ok(())
}

/// Reads a sample file, checks it against the grid and projects it onto
/// `G`-invariant data. Returns the curvature and any warnings.
pub fn load_samples(path: &Path, basis: &Basis, group: &Group) -> Result<(CurvaturePair<f64>, Vec<String>), CliError> {
    let src = std::fs::read_to_string(path)?;
    let name = path.display().to_string();
    let bad = |line: usize, message: String| CliError::Samples { path: name.clone(), line, message };
    let g = basis.grid();
    let expected = grid_hash(g);
    let mut hash = None;
    let mut q = vec![None; g.hemisphere_len()];
    let mut t = vec![None; g.n_s3()];
    let mut header_seen = false;
    for (k, line) in src.lines().enumerate() {
        let ln = k + 1;
        let l = line.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(c) = l.strip_prefix('#') {
            if let Some(h) = c.trim().strip_prefix("hash") {
                hash = Some((ln, h.trim().to_string()));
            }
            continue;
        }
        if !header_seen {
            if l != "set,index,value" {
                return Err(bad(ln, format!("expected header `set,index,value`, found `{l}`")));
            }
            header_seen = true;
            continue;
        }
        let cols: Vec<&str> = l.split(',').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(bad(ln, format!("expected 3 columns, found {}", cols.len())));
        }
        let idx: usize = cols[1].parse().map_err(|_| bad(ln, format!("bad index `{}`", cols[1])))?;
        let val: f64 = cols[2].parse().map_err(|_| bad(ln, format!("bad value `{}`", cols[2])))?;
        if !val.is_finite() {
            return Err(bad(ln, "value is not finite".into()));
        }
        let target = match cols[0] {
            "q" => &mut q,
            "t" => &mut t,
            s => return Err(bad(ln, format!("unknown set `{s}` (q or t)"))),
        };
        let n = target.len();
        let slot = target
            .get_mut(idx)
            .ok_or_else(|| bad(ln, format!("index {idx} out of range for {} ({n} nodes)", cols[0])))?;
        if slot.replace(val).is_some() {
            return Err(bad(ln, format!("duplicate entry {},{idx}", cols[0])));
        }
    }
    match hash {
        None => return Err(bad(1, "missing `# hash` line".into())),
        Some((ln, h)) if h != expected => {
            return Err(bad(ln, format!("grid hash mismatch: file has {h}, grid is {expected}")));
        }
        _ => {}
    }
    let fill = |v: Vec<Option<f64>>, set: &str| -> Result<Vec<f64>, CliError> {
        let missing = v.iter().filter(|x| x.is_none()).count();
        if missing > 0 {
            return Err(bad(src.lines().count(), format!("{missing} `{set}` nodes have no value")));
        }
        Ok(v.into_iter().flatten().collect())
    };
    let (q, t) = (fill(q, "q")?, fill(t, "t")?);

    let q_avg = g.restrict(&group_average(&g.even_extend(&q)?, group, basis)?).to_vec();
    let t_avg = GridAction::new(g, group).average_on_nodes(&t).ok_or_else(|| {
        bad(1, format!("boundary nodes are not closed under group `{}`; cannot symmetrise T", group.name()))
    })?;
    let change = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let mut warnings = Vec::new();
    for (set, d) in [("Q", change(&q, &q_avg)), ("T", change(&t, &t_avg))] {
        if d > INVARIANCE_WARN {
            warnings.push(format!("{name}: {set} samples were not {}-invariant; group averaging changed them by up to {d:.3e}", group.name()));
        }
    }
    Ok((
        CurvaturePair { q: q_avg, t: t_avg, symmetry_tag: group.name().to_string(), vanishing_on_fixed_set: false },
        warnings,
    ))
}
