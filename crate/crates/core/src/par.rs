//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature, [`Execution::Parallel`] dispatches to rayon.
//! Without it every call runs sequentially. Reductions use a fixed chunk
//! partition, so results are bitwise identical in both modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

const REDUCE_CHUNK: usize = 4096;

/// Map `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// Call `f(row_index, row)` on every `row_len`-sized chunk of `data`.
pub fn for_each_row<F>(data: &mut [f64], row_len: usize, exec: Execution, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => data
            .par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(r, row)| f(r, row)),
        _ => data
            .chunks_mut(row_len)
            .enumerate()
            .for_each(|(r, row)| f(r, row)),
    }
}

/// Fill `out[i] = f(i)`.
pub fn fill<F>(out: &mut [f64], exec: Execution, f: F)
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => out
            .par_chunks_mut(REDUCE_CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| {
                for (k, v) in chunk.iter_mut().enumerate() {
                    *v = f(c * REDUCE_CHUNK + k);
                }
            }),
        _ => out.iter_mut().enumerate().for_each(|(i, v)| *v = f(i)),
    }
}

/// Deterministic sum of `f(i)` for `i in 0..n`.
pub fn sum<F>(n: usize, exec: Execution, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(REDUCE_CHUNK);
    let partial = |c: usize| -> f64 {
        let lo = c * REDUCE_CHUNK;
        let hi = (lo + REDUCE_CHUNK).min(n);
        (lo..hi).map(&f).sum()
    };
    let parts: Vec<f64> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..chunks).into_par_iter().map(partial).collect(),
        _ => (0..chunks).map(partial).collect(),
    };
    parts.iter().sum()
}

/// Deterministic dot product.
pub fn dot(a: &[f64], b: &[f64], exec: Execution) -> f64 {
    sum(a.len(), exec, |i| a[i] * b[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_bitwise() {
        let a: Vec<f64> = (0..20_000).map(|i| (i as f64 * 0.37).sin()).collect();
        let b: Vec<f64> = (0..20_000).map(|i| (i as f64 * 0.11).cos()).collect();
        assert_eq!(
            dot(&a, &b, Execution::Sequential).to_bits(),
            dot(&a, &b, Execution::Parallel).to_bits()
        );
        let s = map(&a, Execution::Sequential, |x| x * 2.0);
        let p = map(&a, Execution::Parallel, |x| x * 2.0);
        assert_eq!(s, p);
    }
}
