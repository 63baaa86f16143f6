//! Diagonally preconditioned Krylov solvers for the two-dimensional systems.

use super::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::par::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Stop once `|r| <= rel_tol * |b|` in the Euclidean norm.
    pub rel_tol: f64,
    pub max_iter: usize,
    pub exec: Execution,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        KrylovOptions {
            rel_tol: 1e-10,
            max_iter: 20_000,
            exec: Execution::default(),
        }
    }
}

fn jacobi(a: &BandedMatrix) -> Result<Vec<f64>> {
    a.diagonal()
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            if d == 0.0 || !d.is_finite() {
                Err(Error::LinearSolver(format!("zero diagonal entry in row {i}")))
            } else {
                Ok(1.0 / d)
            }
        })
        .collect()
}

fn norm(v: &[f64], exec: Execution) -> f64 {
    par::dot(v, v, exec).sqrt()
}

/// Preconditioned conjugate gradients for symmetric positive definite `a`.
pub fn solve_pcg(a: &BandedMatrix, b: &[f64], x0: Option<&[f64]>, opts: &KrylovOptions) -> Result<Vec<f64>> {
    let n = a.n();
    let exec = opts.exec;
    let minv = jacobi(a)?;
    let mut x = x0.map_or_else(|| vec![0.0; n], |v| v.to_vec());
    let bnorm = norm(b, exec);
    if bnorm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut r = vec![0.0; n];
    a.matvec(&x, &mut r, exec);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut z: Vec<f64> = (0..n).map(|i| minv[i] * r[i]).collect();
    let mut p = z.clone();
    let mut rz = par::dot(&r, &z, exec);
    let mut ap = vec![0.0; n];
    for _ in 0..opts.max_iter {
        if norm(&r, exec) <= opts.rel_tol * bnorm {
            return Ok(x);
        }
        a.matvec(&p, &mut ap, exec);
        let pap = par::dot(&p, &ap, exec);
        if pap <= 0.0 || !pap.is_finite() {
            return Err(Error::LinearSolver(format!(
                "conjugate gradients broke down (p.Ap = {pap:e})"
            )));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = minv[i] * r[i];
        }
        let rz_new = par::dot(&r, &z, exec);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    if norm(&r, exec) <= opts.rel_tol * bnorm {
        return Ok(x);
    }
    Err(Error::LinearSolver(format!(
        "conjugate gradients did not reach relative residual {:e} in {} iterations",
        opts.rel_tol, opts.max_iter
    )))
}

/// Right-preconditioned BiCGSTAB for general nonsymmetric `a`.
///
/// On breakdown the iteration restarts from the current iterate.
pub fn solve_bicgstab(
    a: &BandedMatrix,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: &KrylovOptions,
) -> Result<Vec<f64>> {
    let n = a.n();
    let exec = opts.exec;
    let minv = jacobi(a)?;
    let mut x = x0.map_or_else(|| vec![0.0; n], |v| v.to_vec());
    let bnorm = norm(b, exec);
    if bnorm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = opts.rel_tol * bnorm;
    let mut r = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut iterations = 0;
    for _restart in 0..8 {
        a.matvec(&x, &mut r, exec);
        for i in 0..n {
            r[i] = b[i] - r[i];
        }
        let r_hat = r.clone();
        let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
        v.iter_mut().for_each(|e| *e = 0.0);
        p.iter_mut().for_each(|e| *e = 0.0);
        while iterations < opts.max_iter {
            iterations += 1;
            if norm(&r, exec) <= target {
                return Ok(x);
            }
            let rho_new = par::dot(&r_hat, &r, exec);
            if rho_new.abs() < 1e-300 || !rho_new.is_finite() || omega == 0.0 {
                break;
            }
            let beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
                y[i] = minv[i] * p[i];
            }
            a.matvec(&y, &mut v, exec);
            let rv = par::dot(&r_hat, &v, exec);
            if rv == 0.0 || !rv.is_finite() {
                break;
            }
            alpha = rho / rv;
            for i in 0..n {
                s[i] = r[i] - alpha * v[i];
            }
            if norm(&s, exec) <= target {
                for i in 0..n {
                    x[i] += alpha * y[i];
                }
                return Ok(x);
            }
            for i in 0..n {
                z[i] = minv[i] * s[i];
            }
            a.matvec(&z, &mut t, exec);
            let tt = par::dot(&t, &t, exec);
            omega = if tt > 0.0 { par::dot(&t, &s, exec) / tt } else { 0.0 };
            for i in 0..n {
                x[i] += alpha * y[i] + omega * z[i];
                r[i] = s[i] - omega * t[i];
            }
        }
        if iterations >= opts.max_iter {
            break;
        }
    }
    a.matvec(&x, &mut r, exec);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    if norm(&r, exec) <= target {
        return Ok(x);
    }
    Err(Error::LinearSolver(format!(
        "BiCGSTAB did not reach relative residual {:e} in {} iterations",
        opts.rel_tol, opts.max_iter
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson(n: usize) -> BandedMatrix {
        let mut a = BandedMatrix::new(n * n, &[-(n as isize), -1, 0, 1, n as isize]);
        for j in 0..n {
            for i in 0..n {
                let k = j * n + i;
                a.add(k, k, 4.0);
                if i > 0 {
                    a.add(k, k - 1, -1.0);
                }
                if i + 1 < n {
                    a.add(k, k + 1, -1.0);
                }
                if j > 0 {
                    a.add(k, k - n, -1.0);
                }
                if j + 1 < n {
                    a.add(k, k + n, -1.0);
                }
            }
        }
        a
    }

    #[test]
    fn pcg_and_bicgstab_on_poisson() {
        let a = poisson(20);
        let exact: Vec<f64> = (0..400).map(|i| ((i * 7 % 13) as f64).sin()).collect();
        let mut b = vec![0.0; 400];
        a.matvec(&exact, &mut b, Execution::Sequential);
        let opts = KrylovOptions::default();
        for x in [
            solve_pcg(&a, &b, None, &opts).unwrap(),
            solve_bicgstab(&a, &b, None, &opts).unwrap(),
        ] {
            for i in 0..400 {
                assert!((x[i] - exact[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn bicgstab_nonsymmetric() {
        let n = 100;
        let mut a = BandedMatrix::new(n, &[-2, -1, 0, 2]);
        for i in 0..n {
            a.add(i, i, 3.0);
            if i >= 1 {
                a.add(i, i - 1, 1.0);
            }
            if i >= 2 {
                a.add(i, i - 2, -1.0);
            }
            if i + 2 < n {
                a.add(i, i + 2, -0.5);
            }
        }
        let exact: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let mut b = vec![0.0; n];
        a.matvec(&exact, &mut b, Execution::Sequential);
        let x = solve_bicgstab(&a, &b, None, &KrylovOptions::default()).unwrap();
        for i in 0..n {
            assert!((x[i] - exact[i]).abs() < 1e-8);
        }
    }
}
