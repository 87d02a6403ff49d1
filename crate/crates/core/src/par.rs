//! Element-wise batch helpers.
//!
//! With the `parallel` feature (on by default) large batches are spread over
//! the rayon pool; without it everything runs on the calling thread. Outputs
//! keep input order either way, so results are bit-identical across both
//! builds as long as callers reduce sequentially.

/// Batches shorter than this stay on the calling thread.
pub const PAR_THRESHOLD: usize = 256;

pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if items.len() >= PAR_THRESHOLD {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    map_seq(items, f)
}

pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Index-based variant used when the work item is just a position.
pub fn map_range<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if len >= 2 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    (0..len).map(f).collect()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let xs: Vec<f64> = (0..10_000).map(|i| i as f64).collect();
        let a = map(&xs, |x| x * 2.0);
        let b = map_seq(&xs, |x| x * 2.0);
        assert_eq!(a, b);
        let c = map_range(37, |i| i * i);
        assert_eq!(c[36], 36 * 36);
    }
}
