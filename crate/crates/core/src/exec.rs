//! Sequential or data-parallel execution of the enumeration loops.
//!
//! Every reduction used with these helpers is a commutative monoid over
//! exact values (integer counts, exact rationals), so the result does not
//! depend on the execution mode or the number of worker threads.

/// How enumeration loops run. Without the `parallel` feature, `Parallel`
/// runs sequentially.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// `Σ_{i < n} f(i)`.
pub(crate) fn sum_range<F>(exec: Exec, n: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).sum();
    }
    let _ = exec;
    (0..n).map(f).sum()
}

/// Maps every item, preserving order.
pub(crate) fn map_collect<I, T, M>(exec: Exec, items: &[I], map: M) -> Vec<T>
where
    I: Sync,
    T: Send,
    M: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(map).collect();
    }
    let _ = exec;
    items.iter().map(map).collect()
}

/// Sizes the global worker pool used by `Exec::Parallel`. Returns `false`
/// if the pool was already initialized or the `parallel` feature is off.
pub fn init_workers(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}
