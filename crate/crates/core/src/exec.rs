//! Parallel/sequential execution helpers.
//!
//! Every data-parallel inner loop in the crate goes through one of these
//! functions. With the `parallel` feature (default) they dispatch to rayon;
//! without it they fall back to the sequential twins below, so the crate
//! builds with no threading dependency at all. The `_seq` variants are always
//! compiled; the benchmark suite compares the two directly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting results in index order.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(n, f)
    }
}

/// Sequential twin of [`map_indexed`].
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Finds the first index in `0..n` for which `f` returns `Some`, together
/// with the payload. "First" means smallest index, independently of how the
/// scan is scheduled.
pub fn find_first<T, F>(n: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n)
            .into_par_iter()
            .find_map_first(|i| f(i).map(|t| (i, t)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        find_first_seq(n, f)
    }
}

/// Sequential twin of [`find_first`].
pub fn find_first_seq<T, F>(n: usize, f: F) -> Option<(usize, T)>
where
    F: Fn(usize) -> Option<T>,
{
    (0..n).find_map(|i| f(i).map(|t| (i, t)))
}
