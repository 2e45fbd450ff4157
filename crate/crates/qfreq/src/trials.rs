//! Trial fan-out: data-parallel with rayon by default, sequential when the
//! `parallel` feature is off. Results always come back in trial order, so the
//! two paths produce identical output.

/// Runs `count` independent trials and collects their results in index order.
#[cfg(feature = "parallel")]
pub fn map_trials<T, F>(count: usize, run: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(run).collect()
}

/// Runs `count` independent trials and collects their results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_trials<T, F>(count: usize, run: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_trials_sequential(count, run)
}

/// Sequential fallback, always compiled so benchmarks can compare both paths.
pub fn map_trials_sequential<T, F>(count: usize, run: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(run).collect()
}
