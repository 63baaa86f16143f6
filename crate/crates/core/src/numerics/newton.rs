//! Damped Newton iteration for the implicit pressure systems.

use super::banded::{solve_banded, BandedMatrix, BandedSystem};
use super::krylov::{solve_bicgstab, KrylovOptions};
use crate::error::{Error, Result};

/// How the Newton correction equation is solved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearSolve {
    Banded,
    Krylov(KrylovOptions),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Convergence when the max-norm of the residual falls to this value.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Step reduction factor of the backtracking line search.
    pub damping: f64,
    pub max_halvings: usize,
    /// Iterates are clamped from below to this value.
    pub lower_bound: Option<f64>,
    pub linear: LinearSolve,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            residual_tol: 1e-10,
            max_iter: 100,
            damping: 0.5,
            max_halvings: 30,
            lower_bound: None,
            linear: LinearSolve::Banded,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

/// Solve `F(x) = 0` from `x0`.
///
/// `residual` writes `F(x)` and may fail for inadmissible `x`; such trial
/// points are treated like a residual increase by the line search.
pub fn newton_solve<R, J>(
    mut residual: R,
    mut jacobian: J,
    x0: Vec<f64>,
    opts: &NewtonOptions,
) -> Result<NewtonOutcome>
where
    R: FnMut(&[f64], &mut [f64]) -> Result<()>,
    J: FnMut(&[f64]) -> Result<BandedMatrix>,
{
    let n = x0.len();
    let mut x = x0;
    if let Some(lb) = opts.lower_bound {
        x.iter_mut().for_each(|v| *v = v.max(lb));
    }
    let mut f = vec![0.0; n];
    residual(&x, &mut f)?;
    let mut fnorm = max_norm(&f);
    let mut trial = vec![0.0; n];
    let mut ftrial = vec![0.0; n];
    for it in 0..opts.max_iter {
        if fnorm <= opts.residual_tol {
            return Ok(NewtonOutcome {
                x,
                iterations: it,
                residual: fnorm,
            });
        }
        let jac = jacobian(&x)?;
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let dx = match opts.linear {
            LinearSolve::Banded => solve_banded(&BandedSystem { matrix: jac, rhs })?,
            LinearSolve::Krylov(k) => solve_bicgstab(&jac, &rhs, None, &k)?,
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            for i in 0..n {
                let mut v = x[i] + lambda * dx[i];
                if let Some(lb) = opts.lower_bound {
                    v = v.max(lb);
                }
                trial[i] = v;
            }
            if residual(&trial, &mut ftrial).is_ok() {
                let tn = max_norm(&ftrial);
                if tn < fnorm {
                    std::mem::swap(&mut x, &mut trial);
                    std::mem::swap(&mut f, &mut ftrial);
                    fnorm = tn;
                    accepted = true;
                    break;
                }
            }
            lambda *= opts.damping;
        }
        if !accepted {
            return Err(Error::NewtonNonConvergence {
                iterations: it + 1,
                residual: fnorm,
                last_iterate: x,
            });
        }
    }
    if fnorm <= opts.residual_tol {
        return Ok(NewtonOutcome {
            x,
            iterations: opts.max_iter,
            residual: fnorm,
        });
    }
    Err(Error::NewtonNonConvergence {
        iterations: opts.max_iter,
        residual: fnorm,
        last_iterate: x,
    })
}
