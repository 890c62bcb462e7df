//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper produces output in index order, so results are identical
//! whichever [`Execution`] mode is chosen. Without the `parallel` feature
//! [`Execution::Parallel`] silently runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
/// Below this many items the parallel path is not worth the fork/join.
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    #[cfg(feature = "parallel")]
    fn parallel_for(self, len: usize) -> bool {
        self == Execution::Parallel && len >= PARALLEL_THRESHOLD
    }

    /// `(0..len).map(f).collect()`.
    pub fn map_range<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(len) {
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }

    /// Maps each item of `items` in order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(items.len()) {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Overwrites `words[i]` with `f(i)`.
    pub fn fill_words<F>(self, words: &mut [u64], f: F)
    where
        F: Fn(usize) -> u64 + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(words.len()) {
            words
                .par_iter_mut()
                .enumerate()
                .for_each(|(i, w)| *w = f(i));
            return;
        }
        for (i, w) in words.iter_mut().enumerate() {
            *w = f(i);
        }
    }

    /// `(0..len).map(f).sum()` for counts.
    pub fn count_range<F>(self, len: usize, f: F) -> u64
    where
        F: Fn(usize) -> u64 + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(len) {
            return (0..len).into_par_iter().map(f).sum();
        }
        (0..len).map(f).sum()
    }
}
