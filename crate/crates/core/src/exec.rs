//! Order-preserving map over an index range, run either on the calling
//! thread or on a rayon pool.
//!
//! Results always come back in index order, so callers that reduce them
//! sequentially get the same bits whatever the thread count.

use std::num::NonZeroUsize;

/// How to evaluate independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon's global pool, or a dedicated pool of the given size.
    /// Without the `parallel` feature this runs sequentially.
    #[default]
    Parallel,
    Threads(NonZeroUsize),
}

impl Execution {
    pub fn threads(n: usize) -> Self {
        match NonZeroUsize::new(n) {
            Some(n) => Execution::Threads(n),
            None => Execution::Parallel,
        }
    }

    pub fn map<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..count).map(f).collect(),
            Execution::Parallel => parallel_map(count, f),
            Execution::Threads(n) => parallel_map_on(n, count, f),
        }
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T: Send, F: Fn(usize) -> T + Sync + Send>(count: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn parallel_map_on<T: Send, F: Fn(usize) -> T + Sync + Send>(
    threads: NonZeroUsize,
    count: usize,
    f: F,
) -> Vec<T> {
    match rayon::ThreadPoolBuilder::new().num_threads(threads.get()).build() {
        Ok(pool) => pool.install(|| parallel_map(count, f)),
        Err(_) => parallel_map(count, f),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T: Send, F: Fn(usize) -> T + Sync + Send>(count: usize, f: F) -> Vec<T> {
    (0..count).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map_on<T: Send, F: Fn(usize) -> T + Sync + Send>(
    _threads: NonZeroUsize,
    count: usize,
    f: F,
) -> Vec<T> {
    parallel_map(count, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let f = |i: usize| (i * i) as u64;
        let seq = Execution::Sequential.map(1000, f);
        assert_eq!(Execution::Parallel.map(1000, f), seq);
        assert_eq!(Execution::threads(3).map(1000, f), seq);
        assert!(Execution::Sequential.map(0, f).is_empty());
    }
}
