//! Execution strategy for the data-parallel loops (subset-DP layers and batch
//! grading). With the `parallel` feature off, `Exec::Parallel` runs
//! sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Layers smaller than this are not worth handing to the thread pool.
#[cfg_attr(not(feature = "parallel"), allow(dead_code))]
const MIN_PARALLEL_ROWS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Fills `out` in rows of `width`, calling `fill(keys[r], row_r)`.
    pub(crate) fn fill_rows<K, T, F>(self, keys: &[K], out: &mut [T], width: usize, fill: F)
    where
        K: Sync,
        T: Send,
        F: Fn(&K, &mut [T]) + Sync + Send,
    {
        debug_assert_eq!(keys.len() * width, out.len());
        if width == 0 {
            return;
        }
        #[cfg(feature = "parallel")]
        if self.is_parallel() && keys.len() >= MIN_PARALLEL_ROWS {
            out.par_chunks_mut(width)
                .zip(keys.par_iter())
                .for_each(|(row, key)| fill(key, row));
            return;
        }
        out.chunks_mut(width)
            .zip(keys)
            .for_each(|(row, key)| fill(key, row));
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<I, O, F>(self, items: &[I], f: F) -> Vec<O>
    where
        I: Sync,
        O: Send,
        F: Fn(&I) -> O + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }
}
