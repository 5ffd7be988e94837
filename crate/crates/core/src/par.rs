//! Trial fan-out: data-parallel via rayon by default, with a sequential
//! fallback that is always available. Results are collected in trial order,
//! so aggregation is deterministic regardless of scheduling.

/// Execution mode for batched trials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon,
}

impl Default for Parallelism {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        Parallelism::Rayon
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        Parallelism::Sequential
    }
}

/// Map `f` over trial indices `0..trials`, returning results in index order.
pub fn map_trials<T, F>(trials: u64, mode: Parallelism, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match mode {
        Parallelism::Sequential => (0..trials).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Rayon => {
            use rayon::prelude::*;
            (0..trials).into_par_iter().map(f).collect()
        }
    }
}
