//! Scenario files: flat TOML with sections.
//!
//! ```toml
//! name = "lopsided"
//! degree = 8
//! resolution = 8
//! seed = 1
//!
//! [group]
//! builtin = "c2xc2"            # or: generators = "rot(1,2,2) rot(3,4,2)"
//!
//! [curvature]
//! family = "poly"              # constant | poly | vanishing | samples
//! q = "2 + 0.5*x1^2"
//! t = "1 + 0.2*x3^2"
//!
//! [solve]
//! mode = "outer"               # inner | outer | endpoint-0 | endpoint-4pi2
//!
//! [verify]
//! mass = true
//! ```

use std::path::{Path, PathBuf};

use qtcurv::builtins::{BuiltinScenario, CurvatureSpec, Poly, SolveMode};
use qtcurv::geometry::group::DEFAULT_ELEMENT_CAP;
use qtcurv::geometry::{DEFAULT_DELTA, DEFAULT_RHO, DEFAULT_T};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum GroupSpec {
    Builtin(String),
    /// Generator list in the `rot(i,j,k)` / `refl(i)` syntax.
    Generators { spec: String, cap: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureSource {
    Family(CurvatureSpec),
    /// CSV of node values, checked against the grid hash.
    Samples(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifySettings {
    pub residual: bool,
    pub margin: f64,
    pub deficits: bool,
    pub probe_scale: f64,
    pub local_eps: f64,
    pub mass: bool,
    /// Basis degrees of the residual refinement study; empty to skip.
    pub refinement: Vec<usize>,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            residual: true,
            margin: 0.2,
            deficits: true,
            probe_scale: 0.9,
            local_eps: 0.1,
            mass: true,
            refinement: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub degree: usize,
    /// `None`: equal to the degree.
    pub resolution: Option<usize>,
    pub seed: u64,
    pub group: GroupSpec,
    pub curvature: CurvatureSource,
    pub mode: SolveMode,
    /// Amplitude of the seeded random start of inner solves (0: start at 0).
    pub start_amplitude: f64,
    pub n_beta: usize,
    pub covering: [f64; 3],
    pub verify: VerifySettings,
    pub out_dir: Option<PathBuf>,
}

impl Scenario {
    pub fn from_builtin(b: &BuiltinScenario) -> Self {
        Self {
            name: b.name.to_string(),
            degree: 8,
            resolution: None,
            seed: 0,
            group: GroupSpec::Builtin(b.group.to_string()),
            curvature: CurvatureSource::Family(b.curvature.clone()),
            mode: b.mode,
            start_amplitude: 0.0,
            n_beta: 17,
            covering: [DEFAULT_DELTA, DEFAULT_T, DEFAULT_RHO],
            verify: VerifySettings::default(),
            out_dir: None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&src, base).map_err(|e| match e {
            CliError::Config { line, message, .. } => CliError::Config {
                file: path.display().to_string(),
                line,
                message,
            },
            other => other,
        })
    }

    /// Parses scenario text; relative paths resolve against `base`.
    pub fn parse(src: &str, base: &Path) -> Result<Self, CliError> {
        let raw: RawScenario = toml::from_str(src).map_err(|e| {
            let line = e.span().map(|s| line_of_offset(src, s.start)).unwrap_or(1);
            config_error(line, e.message().trim().to_string())
        })?;
        let at = |section: Option<&str>, key: &str| locate(src, section, key);
        let err = |section: Option<&str>, key: &str, msg: String| config_error(at(section, key), msg);

        if raw.name.trim().is_empty() {
            return Err(err(None, "name", "scenario name is empty".into()));
        }
        let degree = raw.degree.unwrap_or(8);
        if degree == 0 {
            return Err(err(None, "degree", "degree must be at least 1".into()));
        }

        let group = match (raw.group.builtin, raw.group.generators) {
            (Some(b), None) => {
                qtcurv::Group::builtin(&b).map_err(|e| err(Some("group"), "builtin", e.to_string()))?;
                GroupSpec::Builtin(b)
            }
            (None, Some(g)) => {
                let cap = raw.group.cap.unwrap_or(DEFAULT_ELEMENT_CAP);
                qtcurv::Group::parse("custom", &g, cap).map_err(|e| err(Some("group"), "generators", e.to_string()))?;
                GroupSpec::Generators { spec: g, cap }
            }
            (None, None) => GroupSpec::Builtin("trivial".into()),
            (Some(_), Some(_)) => {
                return Err(err(Some("group"), "generators", "give either `builtin` or `generators`, not both".into()))
            }
        };

        let c = &raw.curvature;
        let poly = |key: &str, v: &Option<String>| -> Result<Poly, CliError> {
            let s = v.as_deref().ok_or_else(|| err(Some("curvature"), "family", format!("missing `{key}`")))?;
            s.parse::<Poly>().map_err(|e| err(Some("curvature"), key, e.to_string()))
        };
        let number = |key: &str, v: &Option<String>| -> Result<f64, CliError> {
            let s = v.as_deref().ok_or_else(|| err(Some("curvature"), "family", format!("missing `{key}`")))?;
            s.trim()
                .parse::<f64>()
                .map_err(|_| err(Some("curvature"), key, format!("`{key}` must be a number for the constant family")))
        };
        let curvature = match c.family.as_str() {
            "constant" => CurvatureSource::Family(CurvatureSpec::Constant { q: number("q", &c.q)?, t: number("t", &c.t)? }),
            "poly" => CurvatureSource::Family(CurvatureSpec::Poly { q: poly("q", &c.q)?, t: poly("t", &c.t)? }),
            "vanishing" => CurvatureSource::Family(CurvatureSpec::Vanishing {
                q0: c.q0.unwrap_or(1.0),
                t0: c.t0.unwrap_or(1.0),
                q: c.q.as_ref().map_or(Ok(Poly::constant(0.0)), |_| poly("q", &c.q))?,
                t: c.t.as_ref().map_or(Ok(Poly::constant(0.0)), |_| poly("t", &c.t))?,
            }),
            "samples" => {
                let f = c
                    .file
                    .as_ref()
                    .ok_or_else(|| err(Some("curvature"), "family", "the samples family needs `file`".into()))?;
                CurvatureSource::Samples(base.join(f))
            }
            other => {
                return Err(err(
                    Some("curvature"),
                    "family",
                    format!("unknown curvature family `{other}` (constant, poly, vanishing, samples)"),
                ))
            }
        };

        let s = raw.solve.unwrap_or_default();
        let mode = match s.mode.as_deref().unwrap_or("outer") {
            "outer" => SolveMode::Outer,
            "endpoint-0" => SolveMode::Endpoint0,
            "endpoint-4pi2" => SolveMode::Endpoint4Pi2,
            "inner" => {
                let b = s.beta.ok_or_else(|| err(Some("solve"), "mode", "mode `inner` needs `beta`".into()))?;
                let fp = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
                if !(0.0..=fp).contains(&b) {
                    return Err(err(Some("solve"), "beta", format!("beta = {b} is outside [0, 4 pi^2]")));
                }
                SolveMode::InnerAt(b)
            }
            other => {
                return Err(err(
                    Some("solve"),
                    "mode",
                    format!("unknown mode `{other}` (inner, outer, endpoint-0, endpoint-4pi2)"),
                ))
            }
        };
        let n_beta = s.n_beta.unwrap_or(17);
        if n_beta < 3 {
            return Err(err(Some("solve"), "n_beta", "n_beta must be at least 3".into()));
        }

        let cv = raw.covering.unwrap_or_default();
        let covering = [
            cv.delta.unwrap_or(DEFAULT_DELTA),
            cv.t.unwrap_or(DEFAULT_T),
            cv.rho.unwrap_or(DEFAULT_RHO),
        ];
        for (key, v) in ["delta", "t", "rho"].iter().zip(covering) {
            if !(v > 0.0) {
                return Err(err(Some("covering"), key, format!("`{key}` must be positive")));
            }
        }

        let d = VerifySettings::default();
        let v = raw.verify.unwrap_or_default();
        let verify = VerifySettings {
            residual: v.residual.unwrap_or(d.residual),
            margin: v.margin.unwrap_or(d.margin),
            deficits: v.deficits.unwrap_or(d.deficits),
            probe_scale: v.probe_scale.unwrap_or(d.probe_scale),
            local_eps: v.local_eps.unwrap_or(d.local_eps),
            mass: v.mass.unwrap_or(d.mass),
            refinement: v.refinement.unwrap_or_default(),
        };
        if !(verify.local_eps > 0.0) {
            return Err(err(Some("verify"), "local_eps", "`local_eps` must be positive".into()));
        }
        if verify.refinement.contains(&0) {
            return Err(err(Some("verify"), "refinement", "refinement degrees must be at least 1".into()));
        }

        Ok(Scenario {
            name: raw.name,
            degree,
            resolution: raw.resolution,
            seed: raw.seed.unwrap_or(0),
            group,
            curvature,
            mode,
            start_amplitude: s.start_amplitude.unwrap_or(0.0),
            n_beta,
            covering,
            verify,
            out_dir: raw.output.and_then(|o| o.dir).map(|d| base.join(d)),
        })
    }
}

fn config_error(line: usize, message: String) -> CliError {
    CliError::Config { file: "<scenario>".into(), line, message }
}

fn line_of_offset(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

/// 1-based line of `key = …` inside `[section]` (top level for `None`),
/// falling back to the section header, then to line 1.
fn locate(src: &str, section: Option<&str>, key: &str) -> usize {
    let mut current: Option<String> = None;
    let mut header = None;
    for (i, line) in src.lines().enumerate() {
        let l = line.trim();
        if let Some(h) = l.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            current = Some(h.trim().to_string());
            if Some(h.trim()) == section {
                header = Some(i + 1);
            }
            continue;
        }
        if current.as_deref() != section {
            continue;
        }
        if let Some((k, _)) = l.split_once('=') {
            if k.trim() == key {
                return i + 1;
            }
        }
    }
    header.unwrap_or(1)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    degree: Option<usize>,
    resolution: Option<usize>,
    seed: Option<u64>,
    #[serde(default)]
    group: RawGroup,
    curvature: RawCurvature,
    solve: Option<RawSolve>,
    covering: Option<RawCovering>,
    verify: Option<RawVerify>,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    builtin: Option<String>,
    generators: Option<String>,
    cap: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurvature {
    family: String,
    #[serde(default, deserialize_with = "number_or_string")]
    q: Option<String>,
    #[serde(default, deserialize_with = "number_or_string")]
    t: Option<String>,
    q0: Option<f64>,
    t0: Option<f64>,
    file: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolve {
    mode: Option<String>,
    beta: Option<f64>,
    n_beta: Option<usize>,
    start_amplitude: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCovering {
    delta: Option<f64>,
    t: Option<f64>,
    rho: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVerify {
    residual: Option<bool>,
    margin: Option<f64>,
    deficits: Option<bool>,
    probe_scale: Option<f64>,
    local_eps: Option<f64>,
    mass: Option<bool>,
    refinement: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

/// Curvature entries may be written `q = 3` or `q = "2 + x1^2"`.
fn number_or_string<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum V {
        I(i64),
        F(f64),
        S(String),
    }
    Ok(Some(match V::deserialize(d)? {
        V::I(i) => i.to_string(),
        V::F(f) => f.to_string(),
        V::S(s) => s,
    }))
}
