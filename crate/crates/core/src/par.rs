//! Data-parallel loop helpers.
//!
//! With the `parallel` feature (default) these run on the rayon pool;
//! without it they fall back to plain sequential iterators. Every helper is
//! order-preserving or reduces with an associative, commutative operation,
//! so results never depend on the number of workers.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(start..end).map(f).sum()`.
pub fn sum<F>(range: Range<u64>, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).sum()
    }
}

/// `(start..end).map(f).collect()`, in index order.
pub fn map<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// `items.iter().map(f).collect()`, in order.
pub fn map_slice<S, T, F>(items: &[S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// `(start..end).filter_map(f).collect()`, in index order.
pub fn filter_map<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().filter_map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.filter_map(f).collect()
    }
}

/// Folds each index into a per-worker accumulator and merges the
/// accumulators. `merge` must be associative and commutative.
pub fn fold<A, F, M>(range: Range<u64>, init: impl Fn() -> A + Sync + Send, fold: F, merge: M) -> A
where
    A: Send,
    F: Fn(A, u64) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        range.into_par_iter().fold(&init, fold).reduce(&init, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = merge;
        range.fold(init(), fold)
    }
}

/// Number of worker threads the helpers will use.
pub fn workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers_match_sequential() {
        assert_eq!(sum(0..1000, |i| i * i), (0..1000u64).map(|i| i * i).sum::<u64>());
        assert_eq!(map(0..10, |i| i + 1), (1..11).collect::<Vec<u64>>());
        assert_eq!(filter_map(0..20, |i| (i % 3 == 0).then_some(i)), vec![0, 3, 6, 9, 12, 15, 18]);
        let hist = fold(
            0..100,
            || vec![0u64; 4],
            |mut h, i| {
                h[(i % 4) as usize] += 1;
                h
            },
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
        assert_eq!(hist, vec![25; 4]);
        assert_eq!(map_slice(&[1, 2, 3], |x| x * 2), vec![2, 4, 6]);
    }
}
