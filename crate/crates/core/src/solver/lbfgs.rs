//! Limited-memory BFGS with a diagonal preconditioner, a linear projection
//! applied to every gradient, and Armijo backtracking.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scalar::{axpy, dot, Real};

#[derive(Debug, Clone)]
pub struct LbfgsOptions<T> {
    pub tol: T,
    pub max_iter: usize,
    pub memory: usize,
    pub armijo: T,
    pub backtrack: T,
    pub max_backtracks: usize,
}

impl<T: Real> Default for LbfgsOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::c(1e-8),
            max_iter: 2000,
            memory: 12,
            armijo: T::c(1e-4),
            backtrack: T::c(0.5),
            max_backtracks: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry<T> {
    pub iteration: usize,
    pub value: T,
    pub grad_norm: T,
}

#[derive(Debug, Clone)]
pub struct LbfgsOutcome<T> {
    pub x: Vec<T>,
    pub value: T,
    pub grad: Vec<T>,
    pub grad_norm: T,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<TraceEntry<T>>,
    /// Why the iteration stopped, when it did not converge.
    pub stop_reason: Option<String>,
}

/// Objective for [`minimize`].
pub trait Objective<T: Real> {
    /// Value and unprojected gradient at `x`. An `Err` marks `x` as
    /// infeasible.
    fn value_grad(&mut self, x: &[T]) -> Result<(T, Vec<T>)>;

    /// `f(to) − f(from)`, where `from` is the last point passed to
    /// [`Objective::value_grad`]. Implementations can evaluate the
    /// difference directly so that it stays accurate when it is far below
    /// the roundoff of `f` itself.
    fn difference(&mut self, from: &[T], from_value: T, to: &[T]) -> Result<T> {
        let _ = from;
        Ok(self.value_grad(to)?.0 - from_value)
    }
}

/// Adapts a closure returning value and gradient.
pub struct FnObjective<F>(pub F);

impl<T: Real, F> Objective<T> for FnObjective<F>
where
    F: FnMut(&[T]) -> Result<(T, Vec<T>)>,
{
    fn value_grad(&mut self, x: &[T]) -> Result<(T, Vec<T>)> {
        (self.0)(x)
    }
}

/// Minimises `f` from `x0` inside the range of `project` (a linear
/// orthogonal projection). Infeasible trial points make the line search
/// backtrack. `precond` is a positive diagonal approximation of the inverse
/// Hessian. The sufficient-decrease test uses [`Objective::difference`],
/// and trace values are accumulated from those differences, so they never
/// increase.
pub fn minimize<T, F, P>(
    f: &mut F,
    project: P,
    precond: &[T],
    x0: &[T],
    opts: &LbfgsOptions<T>,
) -> Result<LbfgsOutcome<T>>
where
    T: Real,
    F: Objective<T> + ?Sized,
    P: Fn(&mut [T]),
{
    let mut x = x0.to_vec();
    project(&mut x);
    let (mut fx, mut g) = f.value_grad(&x)?;
    project(&mut g);
    let mut gn = dot(&g, &g).sqrt();
    let mut trace = vec![TraceEntry { iteration: 0, value: fx, grad_norm: gn }];
    let mut hist: VecDeque<(Vec<T>, Vec<T>, T)> = VecDeque::with_capacity(opts.memory);
    let mut iter = 0;
    let mut stop_reason = None;

    while gn >= opts.tol && iter < opts.max_iter {
        let mut d = two_loop(&g, &hist, precond);
        project(&mut d);
        let mut slope = dot(&g, &d);
        if !(slope < T::zero()) {
            hist.clear();
            d = g.iter().zip(precond).map(|(&gi, &p)| -gi * p).collect();
            project(&mut d);
            slope = dot(&g, &d);
        }
        let mut step = T::one();
        let mut accepted = None;
        for _ in 0..opts.max_backtracks {
            let mut xn = x.clone();
            axpy(step, &d, &mut xn);
            project(&mut xn);
            if let Ok(df) = f.difference(&x, fx, &xn) {
                if df.is_finite() && df <= opts.armijo * step * slope && df <= T::zero() {
                    accepted = Some((xn, df));
                    break;
                }
            }
            step = step * opts.backtrack;
        }
        let (xn, df) = match accepted {
            Some(v) => v,
            None => {
                if hist.is_empty() {
                    stop_reason = Some("line search failed along the preconditioned gradient".into());
                    break;
                }
                hist.clear();
                continue;
            }
        };
        let (_, mut gnew) = f.value_grad(&xn)?;
        project(&mut gnew);
        let s: Vec<T> = xn.iter().zip(&x).map(|(&a, &b)| a - b).collect();
        let y: Vec<T> = gnew.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > T::epsilon() * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if hist.len() == opts.memory {
                hist.pop_front();
            }
            hist.push_back((s, y, T::one() / sy));
        }
        x = xn;
        fx = fx + df;
        g = gnew;
        gn = dot(&g, &g).sqrt();
        iter += 1;
        trace.push(TraceEntry { iteration: iter, value: fx, grad_norm: gn });
    }
    let converged = gn < opts.tol;
    if !converged && stop_reason.is_none() {
        stop_reason = Some(format!("iteration cap {} reached", opts.max_iter));
    }
    if !fx.is_finite() {
        return Err(Error::NonConvergence("objective became non-finite".into()));
    }
    Ok(LbfgsOutcome {
        x,
        value: fx,
        grad: g,
        grad_norm: gn,
        iterations: iter,
        converged,
        trace,
        stop_reason,
    })
}

fn two_loop<T: Real>(g: &[T], hist: &VecDeque<(Vec<T>, Vec<T>, T)>, precond: &[T]) -> Vec<T> {
    let mut q = g.to_vec();
    let mut alpha = Vec::with_capacity(hist.len());
    for (s, y, rho) in hist.iter().rev() {
        let a = *rho * dot(s, &q);
        axpy(-a, y, &mut q);
        alpha.push(a);
    }
    let gamma = match hist.back() {
        Some((s, y, _)) => {
            let my: T = y.iter().zip(precond).fold(T::zero(), |acc, (&v, &p)| acc + v * v * p);
            if my > T::zero() {
                dot(s, y) / my
            } else {
                T::one()
            }
        }
        None => T::one(),
    };
    let mut r: Vec<T> = q.iter().zip(precond).map(|(&v, &p)| gamma * p * v).collect();
    for ((s, y, rho), a) in hist.iter().zip(alpha.iter().rev()) {
        let b = *rho * dot(y, &r);
        axpy(*a - b, s, &mut r);
    }
    r.iter_mut().for_each(|v| *v = -*v);
    r
}
