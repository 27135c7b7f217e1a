//! Execution strategy for the data-parallel loops.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on
//! the rayon pool. Without it every strategy runs sequentially, so results
//! never depend on the feature: each helper preserves input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
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

impl Execution {
    /// True when this strategy actually fans out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub(crate) fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
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

pub(crate) fn map_range<R, F>(exec: Execution, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// The values in `1..end` accepted by `keep`, ascending.
pub(crate) fn filter_range<F>(exec: Execution, end: u32, keep: F) -> Vec<u32>
where
    F: Fn(u32) -> bool + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (1..end).into_par_iter().filter(|&s| keep(s)).collect(),
        _ => (1..end).filter(|&s| keep(s)).collect(),
    }
}
