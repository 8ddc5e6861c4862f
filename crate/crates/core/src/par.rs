//! Thin switch between rayon-backed and sequential execution. Everything
//! in the crate routes data-parallel loops through these helpers so the
//! `parallel` feature is the single toggle.

#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Sequential version, always available (used by the benchmarks to compare
/// against the parallel path).
pub fn map_indexed_seq<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}
