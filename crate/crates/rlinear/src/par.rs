//! Dispatch between rayon data-parallel loops and plain sequential loops.
//!
//! With the `parallel` feature (default) the helpers hand large workloads to
//! rayon; without it they always run sequentially. The `*_seq` variants are
//! always sequential so benchmarks can compare the two paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Minimum element count before rayon is engaged.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 4096;

pub fn maybe_par_chunks_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(&mut [T]) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if data.len() >= PAR_THRESHOLD {
        data.par_chunks_mut(chunk).for_each(f);
        return;
    }
    data.chunks_mut(chunk).for_each(|c| f(c));
}

pub fn maybe_par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    return items.into_par_iter().map(f).collect();
    #[cfg(not(feature = "parallel"))]
    items.into_iter().map(f).collect()
}

/// Sequential reference path, available regardless of features.
pub fn map_seq<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
