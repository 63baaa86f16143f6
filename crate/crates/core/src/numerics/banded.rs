//! Sparse matrices stored by diagonals, with a banded direct solver.

use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// Square matrix stored by diagonals: `diags[k][row] = A[row, row + offsets[k]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    offsets: Vec<isize>,
    diags: Vec<Vec<f64>>,
}

impl BandedMatrix {
    pub fn new(n: usize, offsets: &[isize]) -> Self {
        let mut offsets = offsets.to_vec();
        offsets.sort_unstable();
        offsets.dedup();
        let diags = vec![vec![0.0; n]; offsets.len()];
        BandedMatrix { n, offsets, diags }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offsets(&self) -> &[isize] {
        &self.offsets
    }

    fn slot(&self, offset: isize) -> Option<usize> {
        self.offsets.binary_search(&offset).ok()
    }

    /// `A[row, col] += value`. Panics if the diagonal was not declared.
    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        let off = col as isize - row as isize;
        let k = self
            .slot(off)
            .unwrap_or_else(|| panic!("diagonal {off} not declared"));
        self.diags[k][row] += value;
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let off = col as isize - row as isize;
        self.slot(off).map_or(0.0, |k| self.diags[k][row])
    }

    pub fn diagonal(&self) -> Vec<f64> {
        match self.slot(0) {
            Some(k) => self.diags[k].clone(),
            None => vec![0.0; self.n],
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64], exec: Execution) {
        let n = self.n;
        par::fill(y, exec, |i| {
            let mut acc = 0.0;
            for (k, &off) in self.offsets.iter().enumerate() {
                let j = i as isize + off;
                if j >= 0 && (j as usize) < n {
                    acc += self.diags[k][i] * x[j as usize];
                }
            }
            acc
        });
    }

    /// `max_i sum_j |A[i, j]|`.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.diags.iter().map(|d| d[i].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn bandwidths(&self) -> (usize, usize) {
        let kl = self.offsets.iter().map(|&o| (-o).max(0)).max().unwrap_or(0) as usize;
        let ku = self.offsets.iter().map(|&o| o.max(0)).max().unwrap_or(0) as usize;
        (kl, ku)
    }
}

/// A linear system `A x = rhs`.
#[derive(Debug, Clone)]
pub struct BandedSystem {
    pub matrix: BandedMatrix,
    pub rhs: Vec<f64>,
}

/// LU factorisation with partial pivoting in band storage.
struct BandLu {
    n: usize,
    kl: usize,
    width: usize,
    // row i holds columns i - kl ..= i + kl + ku
    ab: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn factor(a: &BandedMatrix) -> Result<Self> {
        let n = a.n;
        let (kl, ku) = a.bandwidths();
        let width = 2 * kl + ku + 1;
        let mut ab = vec![0.0; n * width];
        for (k, &off) in a.offsets.iter().enumerate() {
            for i in 0..n {
                let j = i as isize + off;
                if j >= 0 && (j as usize) < n {
                    ab[i * width + (off + kl as isize) as usize] = a.diags[k][i];
                }
            }
        }
        let at = |i: usize, j: usize| i * width + (j + kl - i);
        let mut piv = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = ab[at(k, k)].abs();
            for i in k + 1..=last {
                let v = ab[at(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::LinearSolver(format!(
                    "singular banded matrix: zero pivot in column {k}"
                )));
            }
            piv[k] = p;
            let jmax = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    ab.swap(at(k, j), at(p, j));
                }
            }
            let d = ab[at(k, k)];
            for i in k + 1..=last {
                let l = ab[at(i, k)] / d;
                ab[at(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..=jmax {
                        ab[at(i, j)] -= l * ab[at(k, j)];
                    }
                }
            }
        }
        Ok(BandLu {
            n,
            kl,
            width,
            ab,
            piv,
        })
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        let kl = self.kl;
        let w = self.width;
        let at = |i: usize, j: usize| i * w + (j + kl - i);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for i in k + 1..=(k + kl).min(n.saturating_sub(1)) {
                b[i] -= self.ab[at(i, k)] * bk;
            }
        }
        for i in (0..n).rev() {
            let jmax = (i + w - 1 - kl).min(n - 1);
            let mut s = b[i];
            for j in i + 1..=jmax {
                s -= self.ab[at(i, j)] * b[j];
            }
            b[i] = s / self.ab[at(i, i)];
        }
    }
}

/// Direct solve of a banded system.
///
/// The result satisfies `max|A x - rhs| <= 1e-12 (1 + max|rhs|)` after at
/// most two steps of iterative refinement, otherwise the system is reported
/// as ill-conditioned.
pub fn solve_banded(sys: &BandedSystem) -> Result<Vec<f64>> {
    let n = sys.matrix.n;
    if sys.rhs.len() != n {
        return Err(Error::InvalidArgument(format!(
            "rhs has length {}, matrix has {n} rows",
            sys.rhs.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let lu = BandLu::factor(&sys.matrix)?;
    let mut x = sys.rhs.clone();
    lu.solve(&mut x);
    let bound = 1e-12 * (1.0 + sys.rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    let mut r = vec![0.0; n];
    for _ in 0..3 {
        sys.matrix.matvec(&x, &mut r, Execution::Sequential);
        let mut worst = 0.0_f64;
        for i in 0..n {
            r[i] = sys.rhs[i] - r[i];
            worst = worst.max(r[i].abs());
        }
        if !worst.is_finite() {
            break;
        }
        if worst <= bound {
            return Ok(x);
        }
        lu.solve(&mut r);
        for i in 0..n {
            x[i] += r[i];
        }
    }
    Err(Error::LinearSolver(format!(
        "ill-conditioned banded system of size {n}: residual above {bound:e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_laplacian() {
        let n = 50;
        let mut a = BandedMatrix::new(n, &[-1, 0, 1]);
        for i in 0..n {
            a.add(i, i, 2.0);
            if i > 0 {
                a.add(i, i - 1, -1.0);
            }
            if i + 1 < n {
                a.add(i, i + 1, -1.0);
            }
        }
        let exact: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut rhs = vec![0.0; n];
        a.matvec(&exact, &mut rhs, Execution::Sequential);
        let x = solve_banded(&BandedSystem { matrix: a, rhs }).unwrap();
        for i in 0..n {
            assert!((x[i] - exact[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn needs_pivoting() {
        let mut a = BandedMatrix::new(3, &[-2, -1, 0, 1, 2]);
        let dense = [[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [4.0, 5.0, 0.0]];
        for (i, row) in dense.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                a.add(i, j, v);
            }
        }
        let rhs = vec![5.0, 5.5, 14.0];
        let x = solve_banded(&BandedSystem { matrix: a, rhs }).unwrap();
        for (xi, ei) in x.iter().zip([1.0, 2.0, 1.5]) {
            assert!((xi - ei).abs() < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn singular_reported() {
        let mut a = BandedMatrix::new(2, &[-1, 0, 1]);
        a.add(0, 0, 1.0);
        a.add(0, 1, 1.0);
        a.add(1, 0, 1.0);
        a.add(1, 1, 1.0);
        let err = solve_banded(&BandedSystem {
            matrix: a,
            rhs: vec![1.0, 2.0],
        });
        assert!(matches!(err, Err(Error::LinearSolver(_))));
    }
}
