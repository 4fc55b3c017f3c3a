//! Minimisation of `I(·, β)` over symmetric mean-zero fields, the outer
//! minimisation over `β`, the constant shift that turns a critical point
//! into a solution, and the auxiliary linear problem.

pub mod golden;
pub mod lbfgs;

use std::io::Write;

use crate::energy::{d_energy_d_beta, exp_integrals, CurvaturePair, EnergyObjective};
use crate::error::{Error, Result};
use crate::geometry::SymmetryGroup;
use crate::scalar::{dot, Real};
use crate::spectral::{eigen_paneitz, quadratic_form, GroupProjector, HarmonicBasis, SpectralField};

pub use golden::golden_section;
pub use lbfgs::{LbfgsOptions, TraceEntry};

#[derive(Debug, Clone)]
pub struct SolverOptions<T> {
    /// Gradient tolerance of inner solves; `None` means `1e-8 · basis size`.
    pub tol: Option<T>,
    /// Gradient tolerance of the final solve at the selected `β`, and of the
    /// solves used to locate it.
    pub final_tol: T,
    pub max_iter: usize,
    pub memory: usize,
    /// Number of uniform `β` samples in `[0, 4π²]`, endpoints included.
    pub n_beta: usize,
    /// Golden-section stopping width as a fraction of `4π²`.
    pub golden_width: T,
    /// Target for `|∂I/∂β|` at the selected `β`.
    pub polish_tol: T,
    pub polish_max: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol: None,
            final_tol: T::c(1e-9),
            max_iter: 3000,
            memory: 12,
            n_beta: 17,
            golden_width: T::c(1e-3),
            polish_tol: T::c(1e-10),
            polish_max: 40,
        }
    }
}

impl<T: Real> SolverOptions<T> {
    pub fn inner_tol(&self, basis: &HarmonicBasis<T>) -> T {
        self.tol.unwrap_or_else(|| T::c(1e-8) * T::from_usize_lossy(basis.len()))
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult<T> {
    pub u: SpectralField<T>,
    pub beta: T,
    pub energy: T,
    pub grad_norm: T,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceEntry<T>>,
}

/// One evaluation of `m(β)` during the outer search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSample<T> {
    pub beta: T,
    /// `None` when the inner solve failed (e.g. an inadmissible start).
    pub m: Option<T>,
    pub grad_norm: T,
    pub converged: bool,
    pub stage: Stage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Scan,
    Golden,
    Polish,
    Final,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Scan => "scan",
            Stage::Golden => "golden",
            Stage::Polish => "polish",
            Stage::Final => "final",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OuterResult<T> {
    pub best: MinimizeResult<T>,
    /// Every `m(β)` evaluation in order.
    pub samples: Vec<BetaSample<T>>,
    /// `∂I/∂β` at the returned point (zero at an interior minimum); `None`
    /// at an endpoint.
    pub beta_derivative: Option<T>,
}

impl<T: Real> OuterResult<T> {
    /// Scan samples only, in `β` order.
    pub fn scan(&self) -> Vec<BetaSample<T>> {
        self.samples.iter().filter(|s| s.stage == Stage::Scan).copied().collect()
    }

    /// Writes `beta,m,grad_norm,converged,stage` rows.
    pub fn write_csv<W: Write>(&self, comments: &[String], mut out: W) -> Result<()> {
        for c in comments {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "beta,m,grad_norm,converged,stage")?;
        for s in &self.samples {
            let m = s.m.map(|v| format!("{:e}", v.as_f64())).unwrap_or_else(|| "nan".into());
            writeln!(
                out,
                "{:e},{m},{:e},{},{}",
                s.beta.as_f64(),
                s.grad_norm.as_f64(),
                s.converged,
                s.stage.as_str()
            )?;
        }
        Ok(())
    }
}

/// Minimiser over the `G`-invariant, even, mean-zero fields of a basis.
#[derive(Debug, Clone)]
pub struct SymmetricSolver<'a, T> {
    basis: &'a HarmonicBasis<T>,
    projector: GroupProjector<T>,
    precond: Vec<T>,
}

impl<'a, T: Real> SymmetricSolver<'a, T> {
    pub fn new(basis: &'a HarmonicBasis<T>, group: &SymmetryGroup<T>) -> Self {
        let precond = basis
            .modes()
            .iter()
            .map(|m| if m.k == 0 { T::one() } else { T::one() / eigen_paneitz::<T>(m.k) })
            .collect();
        Self {
            basis,
            projector: GroupProjector::new(basis, group),
            precond,
        }
    }

    pub fn basis(&self) -> &HarmonicBasis<T> {
        self.basis
    }

    pub fn projector(&self) -> &GroupProjector<T> {
        &self.projector
    }

    /// Projects onto invariant mean-zero coefficient vectors.
    pub fn project(&self, c: &mut [T]) {
        self.projector.apply_in_place(self.basis, c);
        c[0] = T::zero();
    }

    /// Minimises `I(·, β)` from `start` (zero when `None`).
    pub fn minimize_inner(
        &self,
        beta: T,
        curv: &CurvaturePair<T>,
        start: Option<&SpectralField<T>>,
        tol: T,
        opts: &SolverOptions<T>,
    ) -> Result<MinimizeResult<T>> {
        crate::energy::check_beta(beta)?;
        let x0 = match start {
            Some(s) => s.coefficients.clone(),
            None => vec![T::zero(); self.basis.len()],
        };
        let lopts = LbfgsOptions {
            tol,
            max_iter: opts.max_iter,
            memory: opts.memory,
            ..LbfgsOptions::default()
        };
        let mut objective = EnergyObjective::new(self.basis, curv, beta)?;
        let out = lbfgs::minimize(&mut objective, |c: &mut [T]| self.project(c), &self.precond, &x0, &lopts)?;
        Ok(MinimizeResult {
            u: SpectralField::from_coefficients(out.x),
            beta,
            energy: out.value,
            grad_norm: out.grad_norm,
            iterations: out.iterations,
            converged: out.converged,
            trace: out.trace,
        })
    }

    /// Minimises `m(β) = min_u I(u, β)` over `β ∈ [0, 4π²]`: a uniform scan
    /// with warm starts, golden-section refinement of the best bracket and,
    /// for an interior minimum, a safeguarded secant iteration on
    /// `m'(β) = ∂I/∂β(u_β, β)` so that the compatibility equation holds at the
    /// returned point.
    pub fn minimize_outer(&self, curv: &CurvaturePair<T>, opts: &SolverOptions<T>) -> Result<OuterResult<T>> {
        let fp = T::four_pi_sq();
        let tol = opts.inner_tol(self.basis).min(T::c(1e-6));
        let fine = opts.final_tol;
        let n = opts.n_beta.max(3);
        let mut samples = Vec::new();
        let mut solved: Vec<MinimizeResult<T>> = Vec::new();

        let mut warm: Option<SpectralField<T>> = None;
        let mut scan: Vec<Option<T>> = Vec::with_capacity(n);
        let betas: Vec<T> = (0..n)
            .map(|i| fp * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1))
            .collect();
        for &beta in &betas {
            match self.minimize_inner(beta, curv, warm.as_ref(), tol, opts) {
                Ok(r) => {
                    samples.push(BetaSample { beta, m: Some(r.energy), grad_norm: r.grad_norm, converged: r.converged, stage: Stage::Scan });
                    scan.push(Some(r.energy));
                    warm = Some(r.u.clone());
                    solved.push(r);
                }
                Err(_) => {
                    samples.push(BetaSample { beta, m: None, grad_norm: T::nan(), converged: false, stage: Stage::Scan });
                    scan.push(None);
                }
            }
        }
        let best_i = scan
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|v| (i, v)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .ok_or_else(|| Error::NonConvergence("every inner solve of the beta scan failed".into()))?;

        let nearest = |solved: &[MinimizeResult<T>], beta: T| -> Option<SpectralField<T>> {
            solved
                .iter()
                .min_by(|a, b| {
                    (a.beta - beta)
                        .abs()
                        .partial_cmp(&(b.beta - beta).abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .map(|r| r.u.clone())
        };

        let lo = betas[best_i.saturating_sub(1)];
        let hi = betas[(best_i + 1).min(n - 1)];
        let solve_at = |beta: T, stage: Stage, tol: T, solved: &mut Vec<MinimizeResult<T>>, samples: &mut Vec<BetaSample<T>>| -> Result<MinimizeResult<T>> {
            let start = nearest(solved, beta);
            let r = self.minimize_inner(beta, curv, start.as_ref(), tol, opts)?;
            samples.push(BetaSample { beta, m: Some(r.energy), grad_norm: r.grad_norm, converged: r.converged, stage });
            solved.push(r.clone());
            Ok(r)
        };

        let width = opts.golden_width * fp;
        let (_, (glo, ghi)) = golden_section(
            |b| solve_at(b, Stage::Golden, tol, &mut solved, &mut samples).map(|r| r.energy),
            lo,
            hi,
            width,
        )?;

        // Best point so far among all successful evaluations.
        let pick_best = |solved: &[MinimizeResult<T>]| -> T {
            solved
                .iter()
                .min_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap_or(std::cmp::Ordering::Equal))
                .map(|r| r.beta)
                .unwrap_or(betas[best_i])
        };
        let mut beta_star = pick_best(&solved);

        let interior = |b: T| b > T::zero() && b < fp;
        if interior(beta_star) {
            let deriv = |r: &MinimizeResult<T>| d_energy_d_beta(self.basis, &r.u, r.beta, curv);
            // Bracket a sign change of m'(β).
            let mut candidates = vec![(glo, ghi), (lo, hi)];
            candidates.retain(|(a, b)| interior(*a) && interior(*b) && a < b);
            let mut bracket = None;
            for (a, b) in candidates {
                let ra = solve_at(a, Stage::Polish, fine, &mut solved, &mut samples)?;
                let rb = solve_at(b, Stage::Polish, fine, &mut solved, &mut samples)?;
                let (ha, hb) = (deriv(&ra)?, deriv(&rb)?);
                if ha <= T::zero() && hb >= T::zero() {
                    bracket = Some(((a, ha), (b, hb)));
                    break;
                }
            }
            if let Some(((mut a, mut ha), (mut b, mut hb))) = bracket {
                let mut side = 0i32;
                let mut x = beta_star;
                for _ in 0..opts.polish_max {
                    x = if hb > ha { a - ha * (b - a) / (hb - ha) } else { T::c(0.5) * (a + b) };
                    if !(x > a && x < b) {
                        x = T::c(0.5) * (a + b);
                    }
                    let r = solve_at(x, Stage::Polish, fine, &mut solved, &mut samples)?;
                    let hx = deriv(&r)?;
                    if hx.abs() < opts.polish_tol || (b - a) < T::c(1e-13) * fp {
                        break;
                    }
                    if hx < T::zero() {
                        a = x;
                        ha = hx;
                        if side == -1 {
                            hb = hb * T::c(0.5);
                        }
                        side = -1;
                    } else {
                        b = x;
                        hb = hx;
                        if side == 1 {
                            ha = ha * T::c(0.5);
                        }
                        side = 1;
                    }
                }
                beta_star = x;
            }
        }

        let best = solve_at(beta_star, Stage::Final, fine, &mut solved, &mut samples)?;
        let beta_derivative = if interior(best.beta) {
            Some(d_energy_d_beta(self.basis, &best.u, best.beta, curv)?)
        } else {
            None
        };
        Ok(OuterResult { best, samples, beta_derivative })
    }
}

/// Diagnostics of [`recover_solution`], evaluated after the shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryReport<T> {
    pub shift: T,
    /// `∫_{S⁴₊} Q e^{4u}`.
    pub interior_integral: T,
    /// `∮_{S³} T e^{3u}`.
    pub boundary_integral: T,
    /// `|((4π²−β)/∮Te^{3u})^{4/3} − β/∫Qe^{4u}|` for `0 < β < 4π²`, and the
    /// defect of the one relevant normalisation at an endpoint.
    pub compatibility_defect: T,
    /// `|∫Qe^{4u} − β|`.
    pub interior_defect: T,
    /// `|∮Te^{3u} − (4π² − β)|`.
    pub boundary_defect: T,
}

impl<T: Real> RecoveryReport<T> {
    /// Turns a defect above `tol` into an error.
    pub fn check(&self, tol: T) -> Result<()> {
        let worst = self
            .compatibility_defect
            .max(self.interior_defect)
            .max(self.boundary_defect);
        if !(worst <= tol) {
            return Err(Error::NonConvergence(format!(
                "recovered field violates the normalisations by {:.3e}",
                worst.as_f64()
            )));
        }
        Ok(())
    }
}

/// Adds the constant `C` that makes `∫Qe^{4(u+C)} = β` (for `β > 0`) or
/// `∮Te^{3(u+C)} = 4π²` (for `β = 0`). At a critical point of `I(·, β)` with
/// the right `β`, `u + C` solves the boundary-value problem weakly.
pub fn recover_solution<T: Real>(
    basis: &HarmonicBasis<T>,
    u: &SpectralField<T>,
    beta: T,
    curv: &CurvaturePair<T>,
) -> Result<(SpectralField<T>, RecoveryReport<T>)> {
    crate::energy::check_beta(beta)?;
    let fp = T::four_pi_sq();
    let (iq, it) = exp_integrals(basis, u, curv);
    let shift = if beta > T::zero() {
        if !(iq > T::zero()) {
            return Err(Error::Admissibility { integral: crate::Integral::Interior, value: iq.as_f64() });
        }
        (beta / iq).ln() / T::c(4.0)
    } else {
        if !(it > T::zero()) {
            return Err(Error::Admissibility { integral: crate::Integral::Boundary, value: it.as_f64() });
        }
        (fp / it).ln() / T::c(3.0)
    };
    let v = u.add_constant(basis, shift);
    let (iq2, it2) = exp_integrals(basis, &v, curv);
    let interior_defect = (iq2 - beta).abs();
    let boundary_defect = (it2 - (fp - beta)).abs();
    let compatibility_defect = if beta > T::zero() && beta < fp {
        (((fp - beta) / it2).powf(T::c(4.0 / 3.0)) - beta / iq2).abs()
    } else if beta == T::zero() {
        (it2 - fp).abs()
    } else {
        (iq2 - fp).abs()
    };
    Ok((
        v,
        RecoveryReport {
            shift,
            interior_integral: iq2,
            boundary_integral: it2,
            compatibility_defect,
            interior_defect,
            boundary_defect,
        },
    ))
}

/// Mean-zero minimiser of `J(w) = ½⟨P^{4,3}w, w⟩ − 6∫_{S⁴₊}w + 4∮_{S³}w`
/// and the norm of `∇J` there.
pub fn solve_auxiliary<T: Real>(basis: &HarmonicBasis<T>) -> (SpectralField<T>, T) {
    let lin = auxiliary_linear_term(basis);
    let mut c = vec![T::zero(); basis.len()];
    for (j, m) in basis.modes().iter().enumerate().skip(1) {
        c[j] = -T::c(2.0) * lin[j] / eigen_paneitz::<T>(m.k);
    }
    let w = SpectralField::from_coefficients(c);
    let mut g = auxiliary_grad(basis, &w);
    g[0] = T::zero();
    let gn = dot(&g, &g).sqrt();
    (w, gn)
}

/// `∂/∂c_j (−6∫w + 4∮w)` by quadrature.
fn auxiliary_linear_term<T: Real>(basis: &HarmonicBasis<T>) -> Vec<T> {
    let grid = basis.grid();
    let vol = basis.integrate_hemisphere(&vec![T::one(); grid.hemisphere_len()]);
    let bd = basis.integrate_boundary(&vec![T::one(); grid.n_s3()]);
    vol.iter().zip(&bd).map(|(&v, &b)| -T::c(6.0) * v + T::c(4.0) * b).collect()
}

/// `J(w)`.
pub fn auxiliary_energy<T: Real>(basis: &HarmonicBasis<T>, w: &SpectralField<T>) -> T {
    T::c(0.5) * quadratic_form(basis, w) + dot(&auxiliary_linear_term(basis), &w.coefficients)
}

/// `∇J(w)` in coefficient space.
pub fn auxiliary_grad<T: Real>(basis: &HarmonicBasis<T>, w: &SpectralField<T>) -> Vec<T> {
    let lin = auxiliary_linear_term(basis);
    basis
        .modes()
        .iter()
        .zip(&w.coefficients)
        .zip(lin)
        .map(|((m, &c), l)| T::c(0.5) * eigen_paneitz::<T>(m.k) * c + l)
        .collect()
}
