//! Execution policy for the data-parallel loops in this crate.
//!
//! Every parallel loop has a sequential twin with identical results: work is
//! indexed, mapped independently, and either collected in index order or
//! reduced with an associative, commutative operator.

use std::ops::Range;

/// How a data-parallel loop is executed.
///
/// `Parallel` falls back to sequential execution when the crate is built
/// without the `parallel` feature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Whether loops actually fan out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Number of tasks that run at once.
    pub fn width(self) -> usize {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return rayon::current_num_threads().max(1);
        }
        1
    }

    /// Maps `f` over `range`, returning results in index order.
    pub fn map_collect<T, F>(self, range: Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Maps every index of `range` and folds the results with `combine`.
    ///
    /// `combine` must be associative and commutative for the result to be
    /// independent of the execution policy.
    pub fn map_reduce<T, M, R>(self, range: Range<u64>, identity: T, map: M, combine: R) -> T
    where
        T: Send + Sync + Clone,
        M: Fn(u64) -> T + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(map).reduce(|| identity.clone(), &combine);
        }
        range.map(map).fold(identity, combine)
    }
}
