//! The energy `I(u, β)` of the mean-field formulation and its gradient.

use crate::error::{Error, Integral, Result};
use crate::geometry::{QuadratureGrid, SpherePoint, SymmetryGroup};
use crate::scalar::{vol_s4, Real};
use crate::spectral::{eigen_paneitz, quadratic_form, HarmonicBasis, SpectralField};

/// Integrals below this value are treated as nonpositive.
pub const ADMISSIBILITY_FLOOR: f64 = 1e-300;

/// Prescribed curvatures sampled on the grid: `Q` at hemisphere nodes and
/// `T` at boundary nodes.
#[derive(Debug, Clone)]
pub struct CurvaturePair<T> {
    pub q: Vec<T>,
    pub t: Vec<T>,
    pub symmetry_tag: String,
    pub vanishing_on_fixed_set: bool,
}

impl<T: Real> CurvaturePair<T> {
    /// Samples `q` and `t` and symmetrises them exactly by averaging over
    /// the group, `Q(x) ← (1/|G|) Σ_g Q(g x)`.
    pub fn from_fns<FQ, FT>(grid: &QuadratureGrid<T>, group: &SymmetryGroup<T>, q: FQ, t: FT) -> Self
    where
        FQ: Fn(&SpherePoint<T>) -> T,
        FT: Fn(&SpherePoint<T>) -> T,
    {
        let n = T::from_usize_lossy(group.len());
        let avg = |f: &dyn Fn(&SpherePoint<T>) -> T, x: &SpherePoint<T>| {
            group.elements().iter().fold(T::zero(), |s, g| s + f(&x.transform(g))) / n
        };
        Self {
            q: grid.hemisphere_nodes().iter().map(|x| avg(&q, x)).collect(),
            t: grid.boundary_nodes().iter().map(|x| avg(&t, x)).collect(),
            symmetry_tag: group.name().to_string(),
            vanishing_on_fixed_set: false,
        }
    }

    /// Constant curvatures.
    pub fn constant(grid: &QuadratureGrid<T>, q: T, t: T) -> Self {
        Self {
            q: vec![q; grid.hemisphere_len()],
            t: vec![t; grid.n_s3()],
            symmetry_tag: "any".into(),
            vanishing_on_fixed_set: false,
        }
    }

    /// Largest `|Q|`, `|T|` over nodes whose distance to the fixed set of
    /// `group` is below `radius` (zero when there are none).
    pub fn max_near_fixed_set(&self, grid: &QuadratureGrid<T>, group: &SymmetryGroup<T>, radius: T) -> T {
        let q = grid
            .hemisphere_nodes()
            .iter()
            .zip(&self.q)
            .filter(|(x, _)| group.distance_to_fixed(x) < radius)
            .fold(T::zero(), |m, (_, v)| m.max(v.abs()));
        let t = grid
            .boundary_nodes()
            .iter()
            .zip(&self.t)
            .filter(|(x, _)| group.distance_to_fixed(x) < radius)
            .fold(T::zero(), |m, (_, v)| m.max(v.abs()));
        q.max(t)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.q.iter().chain(&self.t).all(|&v| v >= T::zero())
    }
}

/// `𝔣(β) = β log β + (4/3)(4π²−β) log(4π²−β) + β/3` with `0 log 0 = 0`.
pub fn f_beta<T: Real>(beta: T) -> Result<T> {
    check_beta(beta)?;
    let fp = T::four_pi_sq();
    let xlogx = |x: T| if x > T::zero() { x * x.ln() } else { T::zero() };
    Ok(xlogx(beta) + T::c(4.0 / 3.0) * xlogx(fp - beta) + beta / T::c(3.0))
}

pub(crate) fn check_beta<T: Real>(beta: T) -> Result<()> {
    if !(beta >= T::zero() && beta <= T::four_pi_sq()) {
        return Err(Error::Domain {
            what: "beta",
            value: beta.as_f64(),
            domain: "[0, 4 pi^2]",
        });
    }
    Ok(())
}

/// `log Σ w_i c_i e^{p u_i}` for signed `c`, with the normalised densities
/// `c_i e^{p u_i} / Σ w c e^{p u}` (weights not included).
pub(crate) fn signed_log_integral<T: Real>(
    weights: &[T],
    coef: &[T],
    u: &[T],
    power: T,
    which: Integral,
) -> Result<(T, Vec<T>)> {
    let shift = u
        .iter()
        .zip(coef)
        .filter(|(_, &c)| c != T::zero())
        .fold(T::neg_infinity(), |m, (&v, _)| m.max(power * v));
    if shift == T::neg_infinity() {
        return Err(Error::Admissibility { integral: which, value: 0.0 });
    }
    let dens: Vec<T> = u
        .iter()
        .zip(coef)
        .map(|(&v, &c)| if c == T::zero() { T::zero() } else { c * (power * v - shift).exp() })
        .collect();
    let s = weights.iter().zip(&dens).fold(T::zero(), |a, (&w, &d)| a + w * d);
    let log_floor = T::c(ADMISSIBILITY_FLOOR.ln());
    if !(s > T::zero()) || shift + s.ln() <= log_floor {
        let value = if s > T::zero() { (shift + s.ln()).exp() } else { s * shift.exp() };
        return Err(Error::Admissibility { integral: which, value: value.as_f64() });
    }
    let inv = T::one() / s;
    Ok((shift + s.ln(), dens.into_iter().map(|d| d * inv).collect()))
}

/// `(3/4π²) ∫_{S⁴₊} u`; for an even field this is the degree-0 coefficient
/// times the constant mode value.
pub fn mean_value<T: Real>(basis: &HarmonicBasis<T>, u: &SpectralField<T>) -> T {
    u.coefficients[0] * basis.constant_mode_value()
}

/// `∫_{S⁴₊} u`.
pub fn hemisphere_integral<T: Real>(u: &SpectralField<T>) -> T {
    T::c(0.5) * vol_s4::<T>().sqrt() * u.coefficients[0]
}

/// The two log-integrals and, when requested, their normalised densities.
struct ExpTerms<T> {
    log_q: Option<(T, Vec<T>)>,
    log_t: Option<(T, Vec<T>)>,
}

fn exp_terms<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    curv: &CurvaturePair<T>,
    need_q: bool,
    need_t: bool,
) -> Result<ExpTerms<T>> {
    let grid = basis.grid();
    let log_q = if need_q {
        let uh = basis.synth_hemisphere(&u.coefficients);
        Some(signed_log_integral(grid.hemisphere_weights(), &curv.q, &uh, T::c(4.0), Integral::Interior)?)
    } else {
        None
    };
    let log_t = if need_t {
        let ub = basis.synth_boundary(&u.coefficients);
        Some(signed_log_integral(grid.boundary_weights(), &curv.t, &ub, T::c(3.0), Integral::Boundary)?)
    } else {
        None
    };
    Ok(ExpTerms { log_q, log_t })
}

/// `I(u, β)`. At `β = 0` the `Q` term is absent and at `β = 4π²` the `T`
/// term is absent, so only the remaining integral must be positive.
pub fn energy<T: Real>(basis: &HarmonicBasis<T>, u: &SpectralField<T>, beta: T, curv: &CurvaturePair<T>) -> Result<T> {
    check_beta(beta)?;
    let fp = T::four_pi_sq();
    let terms = exp_terms(basis, u, curv, beta > T::zero(), beta < fp)?;
    let mut e = quadratic_form(basis, u) + T::c(12.0) * hemisphere_integral(u) + f_beta(beta)?;
    if let Some((lq, _)) = terms.log_q {
        e = e - beta * lq;
    }
    if let Some((lt, _)) = terms.log_t {
        e = e - T::c(4.0 / 3.0) * (fp - beta) * lt;
    }
    Ok(e)
}

/// Value, gradient, and the normalised densities with their log-integrals.
struct Evaluation<T> {
    value: T,
    grad: Vec<T>,
    q: Option<(T, Vec<T>)>,
    t: Option<(T, Vec<T>)>,
}

fn evaluate<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    beta: T,
    curv: &CurvaturePair<T>,
) -> Result<Evaluation<T>> {
    check_beta(beta)?;
    let fp = T::four_pi_sq();
    let terms = exp_terms(basis, u, curv, beta > T::zero(), beta < fp)?;
    let mut e = quadratic_form(basis, u) + T::c(12.0) * hemisphere_integral(u) + f_beta(beta)?;
    let mut g: Vec<T> = basis
        .modes()
        .iter()
        .zip(&u.coefficients)
        .map(|(m, &c)| eigen_paneitz::<T>(m.k) * c)
        .collect();
    g[0] = g[0] + T::c(12.0) * T::c(0.5) * vol_s4::<T>().sqrt();
    if let Some((lq, dens)) = &terms.log_q {
        e = e - beta * *lq;
        let proj = basis.integrate_hemisphere(dens);
        crate::scalar::axpy(-T::c(4.0) * beta, &proj, &mut g);
    }
    if let Some((lt, dens)) = &terms.log_t {
        e = e - T::c(4.0 / 3.0) * (fp - beta) * *lt;
        let proj = basis.integrate_boundary(dens);
        crate::scalar::axpy(-T::c(4.0) * (fp - beta), &proj, &mut g);
    }
    Ok(Evaluation { value: e, grad: g, q: terms.log_q, t: terms.log_t })
}

/// `I(u, β)` together with its gradient in coefficient space.
pub fn energy_and_grad<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    beta: T,
    curv: &CurvaturePair<T>,
) -> Result<(T, SpectralField<T>)> {
    let ev = evaluate(basis, u, beta, curv)?;
    Ok((ev.value, SpectralField::from_coefficients(ev.grad)))
}

/// `I(·, β)` as an optimisation objective over coefficient vectors.
///
/// Differences `I(v) − I(u)` are evaluated directly: the quadratic part from
/// the coefficient increment, and each log-integral as
/// `log(1 + ∫ρ_u (e^{p(v−u)} − 1))` with the normalised density `ρ_u` at `u`.
/// This keeps line searches meaningful when the decrease is below the
/// roundoff of `I` itself.
pub struct EnergyObjective<'a, T> {
    basis: &'a HarmonicBasis<T>,
    curv: &'a CurvaturePair<T>,
    beta: T,
    cache: Option<(Vec<T>, Evaluation<T>)>,
}

impl<'a, T: Real> EnergyObjective<'a, T> {
    pub fn new(basis: &'a HarmonicBasis<T>, curv: &'a CurvaturePair<T>, beta: T) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { basis, curv, beta, cache: None })
    }

    fn log_ratio(weights: &[T], dens: &[T], du: &[T], power: T, log_old: T, which: Integral) -> Result<T> {
        let r = weights
            .iter()
            .zip(dens)
            .zip(du)
            .fold(T::zero(), |s, ((&w, &d), &v)| s + w * d * (power * v).exp_m1());
        let log_floor = T::c(ADMISSIBILITY_FLOOR.ln());
        if !(r > -T::one()) || log_old + r.ln_1p() <= log_floor {
            let value = ((T::one() + r).max(T::zero())).as_f64() * log_old.as_f64().exp();
            return Err(Error::Admissibility { integral: which, value });
        }
        Ok(r.ln_1p())
    }
}

impl<'a, T: Real> crate::solver::lbfgs::Objective<T> for EnergyObjective<'a, T> {
    fn value_grad(&mut self, x: &[T]) -> Result<(T, Vec<T>)> {
        let u = SpectralField::from_coefficients(x.to_vec());
        let ev = evaluate(self.basis, &u, self.beta, self.curv)?;
        let out = (ev.value, ev.grad.clone());
        self.cache = Some((x.to_vec(), ev));
        Ok(out)
    }

    fn difference(&mut self, from: &[T], _from_value: T, to: &[T]) -> Result<T> {
        if self.cache.as_ref().map(|(x, _)| x.as_slice() != from).unwrap_or(true) {
            self.value_grad(from)?;
        }
        let (_, ev) = self.cache.as_ref().expect("cache filled above");
        let basis = self.basis;
        let grid = basis.grid();
        let fp = T::four_pi_sq();
        let dc: Vec<T> = to.iter().zip(from).map(|(&a, &b)| a - b).collect();
        let mut df = basis
            .modes()
            .iter()
            .zip(dc.iter().zip(from))
            .fold(T::zero(), |s, (m, (&d, &c))| s + eigen_paneitz::<T>(m.k) * d * (c + c + d))
            * T::c(0.5);
        df = df + T::c(6.0) * vol_s4::<T>().sqrt() * dc[0];
        if let Some((lq, dens)) = &ev.q {
            let du = basis.synth_hemisphere(&dc);
            let lr = Self::log_ratio(grid.hemisphere_weights(), dens, &du, T::c(4.0), *lq, Integral::Interior)?;
            df = df - self.beta * lr;
        }
        if let Some((lt, dens)) = &ev.t {
            let du = basis.synth_boundary(&dc);
            let lr = Self::log_ratio(grid.boundary_weights(), dens, &du, T::c(3.0), *lt, Integral::Boundary)?;
            df = df - T::c(4.0 / 3.0) * (fp - self.beta) * lr;
        }
        Ok(df)
    }
}

pub fn energy_grad<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    beta: T,
    curv: &CurvaturePair<T>,
) -> Result<SpectralField<T>> {
    energy_and_grad(basis, u, beta, curv).map(|(_, g)| g)
}

/// `∫_{S⁴₊} Q e^{4u}` and `∮_{S³} T e^{3u}` by quadrature (no positivity
/// requirement).
pub fn exp_integrals<T: Real>(basis: &HarmonicBasis<T>, u: &SpectralField<T>, curv: &CurvaturePair<T>) -> (T, T) {
    let grid = basis.grid();
    let uh = basis.synth_hemisphere(&u.coefficients);
    let ub = basis.synth_boundary(&u.coefficients);
    let iq = grid
        .hemisphere_weights()
        .iter()
        .zip(&curv.q)
        .zip(&uh)
        .fold(T::zero(), |s, ((&w, &q), &v)| s + w * q * (T::c(4.0) * v).exp());
    let it = grid
        .boundary_weights()
        .iter()
        .zip(&curv.t)
        .zip(&ub)
        .fold(T::zero(), |s, ((&w, &t), &v)| s + w * t * (T::c(3.0) * v).exp());
    (iq, it)
}

/// `∂I/∂β = log(β/∫Qe^{4u}) − (4/3) log((4π²−β)/∮Te^{3u})` for
/// `0 < β < 4π²`. It vanishes exactly when the compatibility equation
/// `((4π²−β)/∮Te^{3u})^{4/3} = β/∫Qe^{4u}` holds.
pub fn d_energy_d_beta<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    beta: T,
    curv: &CurvaturePair<T>,
) -> Result<T> {
    let fp = T::four_pi_sq();
    if !(beta > T::zero() && beta < fp) {
        return Err(Error::Domain {
            what: "beta",
            value: beta.as_f64(),
            domain: "(0, 4 pi^2)",
        });
    }
    let terms = exp_terms(basis, u, curv, true, true)?;
    let lq = terms.log_q.map(|v| v.0).unwrap_or_else(T::zero);
    let lt = terms.log_t.map(|v| v.0).unwrap_or_else(T::zero);
    Ok(beta.ln() - lq - T::c(4.0 / 3.0) * ((fp - beta).ln() - lt))
}
