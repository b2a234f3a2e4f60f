//! Data-parallel map helpers with a sequential fallback.
//!
//! Batch operations (budget grids, multi-start fits, Monte Carlo sweeps)
//! funnel through [`map`] / [`try_map`]. With the `parallel` feature
//! (default) these dispatch to rayon; without it they run plain iterator
//! loops. Output ordering is by input index in both modes, so results are
//! bit-identical regardless of feature selection or thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Whether this build parallelises batch maps.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Map `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map `f` over `items`, preserving order.
#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Fallible map; returns the first error encountered (by index order in the
/// sequential build; rayon may surface a different failing index, but any
/// error aborts the whole batch either way).
#[cfg(feature = "parallel")]
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Fallible map; returns the first error encountered.
#[cfg(not(feature = "parallel"))]
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Sequential reference map, always available. Benches compare this against
/// [`map`] on the same workload.
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}
