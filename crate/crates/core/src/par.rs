//! Index-range fan-out. With the `parallel` feature the ranges are split over
//! the current rayon pool; results are combined in index order or with
//! associative integer reductions only.

use alloc::vec::Vec;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

/// Wrapping sum of `f(i)` over `0..len`.
#[cfg(feature = "parallel")]
pub(crate) fn wrapping_sum<F>(len: usize, f: F) -> u128
where
    F: Fn(usize) -> u128 + Sync + Send,
{
    (0..len)
        .into_par_iter()
        .map(f)
        .reduce(|| 0, u128::wrapping_add)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn wrapping_sum<F>(len: usize, f: F) -> u128
where
    F: Fn(usize) -> u128,
{
    (0..len).map(f).fold(0, u128::wrapping_add)
}
