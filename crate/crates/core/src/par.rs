//! Data-parallel helpers. With the `parallel` feature the work runs on the
//! rayon pool; without it, or when the caller asks for sequential execution,
//! the same closures run on the current thread. Results are always returned
//! in input order so output never depends on scheduling.

/// How a batch should be executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Exec {
    pub fn from_flag(parallel: bool) -> Self {
        if parallel {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }

    /// True when this build can actually run work in parallel.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over the index range `0..n`, preserving order.
pub fn map_range<R, F>(exec: Exec, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Splits `0..n` into contiguous chunks and maps `f` over the chunk bounds.
/// Used by scans that keep a per-chunk best candidate and merge afterwards.
pub fn map_chunks<R, F>(exec: Exec, n: u64, chunk: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64, u64) -> R + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = n.div_ceil(chunk) as usize;
    map_range(exec, count, |i| {
        let lo = i as u64 * chunk;
        let hi = (lo + chunk).min(n);
        f(lo, hi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_and_keep_order() {
        let items: Vec<u64> = (0..1000).collect();
        let a = map(Exec::Sequential, &items, |x| x * x);
        let b = map(Exec::Parallel, &items, |x| x * x);
        assert_eq!(a, b);
        let c = map_chunks(Exec::Parallel, 1001, 100, |lo, hi| (lo, hi));
        assert_eq!(c.len(), 11);
        assert_eq!(c[10], (1000, 1001));
    }
}
