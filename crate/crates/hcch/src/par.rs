//! Data-parallel map with a sequential fallback.
//!
//! Scans over the parameter plane, per-cell sweep runs, and per-N spectra
//! are embarrassingly parallel: each item is pure and owns its output. With
//! the `parallel` feature (default) [`par_map`] dispatches to a rayon
//! parallel iterator; without it the same call sites run sequentially, so
//! results are identical either way — ordering is preserved by index, and
//! no floating-point reduction order changes between the two paths.
//!
//! Both concrete implementations are always compiled and exported so the
//! benchmark suite can compare them on one build; the feature only selects
//! which one [`par_map`] forwards to.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items`, preserving order.
///
/// Dispatches on the `parallel` feature. `f` must be pure with respect to
/// the observable output: the two backends must produce identical results.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// Rayon-backed implementation (compiled only with the `parallel` feature).
#[cfg(feature = "parallel")]
pub fn map_parallel<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(|t| f(t)).collect()
}

/// Plain sequential implementation, always available.
pub fn map_sequential<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(|t| f(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order_and_values() {
        let xs: Vec<u64> = (0..1000).collect();
        let out = par_map(&xs, |&x| x * x);
        let seq = map_sequential(&xs, |&x| x * x);
        assert_eq!(out, seq);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn backends_agree_bitwise_on_floats() {
        // Each item's result depends only on that item, so parallel and
        // sequential outputs must match bit for bit.
        let xs: Vec<f64> = (0..257).map(|i| i as f64 * 0.37).collect();
        let par = map_parallel(&xs, |&x| (x.sin() * x.exp()).sqrt());
        let seq = map_sequential(&xs, |&x| (x.sin() * x.exp()).sqrt());
        for (a, b) in par.iter().zip(seq.iter()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
