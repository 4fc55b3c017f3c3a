//! Scenario runner: configuration, curvature sample files and CSV output.

pub mod config;
pub mod run;
pub mod samples;

use qtcurv::builtins::{builtin_group_names, builtin_scenarios};
use qtcurv::Group;

pub use config::Scenario;
pub use run::{run, RunOptions, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{file}:{line}: {message}")]
    Config { file: String, line: usize, message: String },

    #[error("{path}:{line}: {message}")]
    Samples { path: String, line: usize, message: String },

    #[error(transparent)]
    Core(#[from] qtcurv::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Table of curvature families, groups and named scenarios.
pub fn list_builtins() -> String {
    let mut s = String::from("curvature families\n");
    for (name, what) in [
        ("constant", "Q = q, T = t"),
        ("poly", "polynomials in x1..x5, averaged over the group"),
        ("vanishing", "q0 V (1 + p_Q), t0 V (1 + p_T) with V = sin^2 of the distance to the fixed boundary set"),
        ("samples", "node values from a CSV file checked against the grid hash"),
    ] {
        s.push_str(&format!("  {name:<10} {what}\n"));
    }
    s.push_str("groups\n");
    for name in builtin_group_names() {
        let g = Group::builtin(&name).expect("builtin group");
        let kind = run::fixed_label(g.fixed_set_kind());
        let what = match name.as_str() {
            "trivial" => "identity only".to_string(),
            "refl" => "reflection x1 -> -x1".to_string(),
            n if n.contains('x') => format!("product of rotations by 2pi/{} in (x1,x2) and (x3,x4)", &n[1..n.find('x').unwrap()]),
            n => format!("C_{} rotations by 2pi/{} in (x1,x2)", &n[1..], &n[1..]),
        };
        s.push_str(&format!("  {name:<8} order {:<3} fixed boundary set {kind:<6} {what}\n", g.len()));
    }
    s.push_str("scenarios\n");
    for b in builtin_scenarios() {
        s.push_str(&format!("  {:<21} group {:<7} mode {:<14} {}\n", b.name, b.group, b.mode.as_str(), b.description));
    }
    s
}
