//! Data-parallel execution helpers.
//!
//! Hot loops (per-edge expectations, grid searches, Monte-Carlo sweeps,
//! ensemble runs, brute-force enumeration) are expressed as indexed maps so
//! that the rayon-backed and sequential variants produce results in the same
//! order. Reductions are performed sequentially over the collected buffer,
//! which makes floating-point results identical across thread counts.
//!
//! With the `parallel` feature disabled the crate falls back to the
//! sequential path unconditionally; with it enabled (the default) callers can
//! still request [`Parallelism::Sequential`] explicitly, which is what the
//! criterion benches use to compare the two.

/// Execution strategy for embarrassingly parallel loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Rayon work-stealing pool; equivalent to `Sequential` when the
    /// `parallel` feature is disabled.
    Rayon,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Rayon
        } else {
            Parallelism::Sequential
        }
    }
}

/// Map `f` over `0..n`, returning results in index order.
pub fn map_indexed<T, F>(par: Parallelism, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match par {
        Parallelism::Sequential => (0..n).map(f).collect(),
        Parallelism::Rayon => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..n).map(f).collect()
            }
        }
    }
}

/// Configure the global worker-thread bound. A best-effort call: if a pool
/// already exists the existing configuration is kept (results do not depend
/// on the thread count, only wall time does).
pub fn configure_threads(threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}
