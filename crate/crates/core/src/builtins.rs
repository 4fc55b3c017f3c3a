//! Built-in curvature families, groups and scenarios.

use std::fmt;

use crate::energy::CurvaturePair;
use crate::error::{Error, Result};
use crate::geometry::{QuadratureGrid, SpherePoint, SymmetryGroup};
use crate::scalar::Real;

/// Polynomial in `x₁..x₅`, e.g. `2 + 0.8*x1^2 - 0.3*x1*x2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub terms: Vec<(f64, [u32; 5])>,
}

impl Poly {
    pub fn constant(c: f64) -> Self {
        Self { terms: vec![(c, [0; 5])] }
    }

    pub fn eval<T: Real>(&self, x: &SpherePoint<T>) -> T {
        let c = x.coords();
        self.terms.iter().fold(T::zero(), |s, (k, e)| {
            s + T::c(*k) * (0..5).fold(T::one(), |p, i| p * c[i].powi(e[i] as i32))
        })
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max().unwrap_or(0)
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config(format!("cannot parse polynomial `{s}`: {why}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        // Split into signed terms.
        let mut terms_txt = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.char_indices() {
            let prev = compact[..i].chars().last();
            if (ch == '+' || ch == '-') && i > 0 && !matches!(prev, Some('e') | Some('E') | Some('^')) {
                terms_txt.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms_txt.push(cur);
        let mut terms = Vec::new();
        for t in terms_txt {
            let (sign, body) = match t.strip_prefix('-') {
                Some(r) => (-1.0, r),
                None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let mut coef = sign;
            let mut exps = [0u32; 5];
            for factor in body.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, p)) => (i, p.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                        None => (var, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| bad("bad variable"))?;
                    if !(1..=5).contains(&i) {
                        return Err(bad("variables are x1..x5"));
                    }
                    exps[i - 1] += pow;
                } else {
                    coef *= factor.parse::<f64>().map_err(|_| bad("bad coefficient"))?;
                }
            }
            terms.push((coef, exps));
        }
        Ok(Self { terms })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, (c, e)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(if *c < 0.0 { " - " } else { " + " })?;
            } else if *c < 0.0 {
                f.write_str("-")?;
            }
            write!(f, "{}", c.abs())?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, p)?,
                }
            }
        }
        Ok(())
    }
}

/// Curvature data built from closed-form families.
#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureSpec {
    /// `Q ≡ q`, `T ≡ t`.
    Constant { q: f64, t: f64 },
    /// Polynomials in the coordinates, symmetrised over the group.
    Poly { q: Poly, t: Poly },
    /// `Q = q₀ V (1 + p_Q)`, `T = t₀ V (1 + p_T)` with `V = sin² dist(·, 𝓕_∂)`,
    /// which vanishes on the fixed boundary set.
    Vanishing { q0: f64, t0: f64, q: Poly, t: Poly },
}

impl CurvatureSpec {
    pub fn family(&self) -> &'static str {
        match self {
            CurvatureSpec::Constant { .. } => "constant",
            CurvatureSpec::Poly { .. } => "poly",
            CurvatureSpec::Vanishing { .. } => "vanishing",
        }
    }

    pub fn build<T: Real>(&self, grid: &QuadratureGrid<T>, group: &SymmetryGroup<T>) -> CurvaturePair<T> {
        let mut pair = match self {
            CurvatureSpec::Constant { q, t } => {
                let mut p = CurvaturePair::constant(grid, T::c(*q), T::c(*t));
                p.symmetry_tag = group.name().to_string();
                p
            }
            CurvatureSpec::Poly { q, t } => CurvaturePair::from_fns(grid, group, |x| q.eval(x), |x| t.eval(x)),
            CurvatureSpec::Vanishing { q0, t0, q, t } => CurvaturePair::from_fns(
                grid,
                group,
                |x| T::c(*q0) * group.vanishing_profile(x) * (T::one() + q.eval(x)),
                |x| T::c(*t0) * group.vanishing_profile(x) * (T::one() + t.eval(x)),
            ),
        };
        pair.vanishing_on_fixed_set = matches!(self, CurvatureSpec::Vanishing { .. });
        pair
    }
}

/// What the runner solves for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMode {
    InnerAt(f64),
    Outer,
    Endpoint0,
    Endpoint4Pi2,
}

impl SolveMode {
    pub fn fixed_beta(&self) -> Option<f64> {
        let fp = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        match *self {
            SolveMode::InnerAt(b) => Some(b),
            SolveMode::Outer => None,
            SolveMode::Endpoint0 => Some(0.0),
            SolveMode::Endpoint4Pi2 => Some(fp),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SolveMode::InnerAt(_) => "inner",
            SolveMode::Outer => "outer",
            SolveMode::Endpoint0 => "endpoint-0",
            SolveMode::Endpoint4Pi2 => "endpoint-4pi2",
        }
    }
}

/// A named, fully specified problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltinScenario {
    pub name: &'static str,
    pub group: &'static str,
    pub curvature: CurvatureSpec,
    pub mode: SolveMode,
    pub description: &'static str,
}

pub fn builtin_scenarios() -> Vec<BuiltinScenario> {
    let p = |s: &str| s.parse::<Poly>().expect("builtin polynomial");
    vec![
        BuiltinScenario {
            name: "background",
            group: "trivial",
            curvature: CurvatureSpec::Constant { q: 3.0, t: 0.0 },
            mode: SolveMode::Endpoint4Pi2,
            description: "round hemisphere: Q = 3, T = 0, exact solution u = 0",
        },
        BuiltinScenario {
            name: "thm-main",
            group: "c2xc2",
            curvature: CurvatureSpec::Poly {
                q: p("2 + 0.8*x1^2 + 0.8*x2^2 - 0.6*x3^2 + 0.4*x5^2"),
                t: p("1 + 0.5*x3^2 + 0.5*x4^2 - 0.3*x1*x2"),
            },
            mode: SolveMode::Outer,
            description: "positive Q, T under rotations by pi in both coordinate pairs (empty fixed set)",
        },
        BuiltinScenario {
            name: "reflection-vanishing",
            group: "refl",
            curvature: CurvatureSpec::Vanishing { q0: 3.0, t0: 2.0, q: p("0.3*x2"), t: p("0.2*x3") },
            mode: SolveMode::Outer,
            description: "reflection x1 -> -x1; Q and T vanish quadratically on the fixed 2-sphere",
        },
    ]
}

pub fn builtin_scenario(name: &str) -> Result<BuiltinScenario> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Config(format!("unknown builtin scenario `{name}`")))
}

/// Names of the built-in groups: `trivial`, `c2..c8`, `refl`, and the pair
/// products `c{k}xc{m}` (listed for `k = m ≤ 4`).
pub fn builtin_group_names() -> Vec<String> {
    let mut v = vec!["trivial".to_string()];
    v.extend((2..=8).map(|k| format!("c{k}")));
    v.push("refl".into());
    v.extend((2..=4).map(|k| format!("c{k}xc{k}")));
    v
}
