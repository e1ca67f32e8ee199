//! A fixed-size worker pool. Every parallel loop in the crate reduces in a
//! fixed order, so results do not depend on the thread count.

use crate::error::{Error, Result};

pub struct Parallelism {
    pool: rayon::ThreadPool,
}

impl Parallelism {
    /// `threads = 0` uses one thread per available core.
    pub fn new(threads: usize) -> Result<Parallelism> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        Ok(Parallelism { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `f` with this pool as the current one.
    pub fn install<R: Send, F: FnOnce() -> R + Send>(&self, f: F) -> R {
        self.pool.install(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rayon::prelude::*;

    #[test]
    fn pool_sizes() {
        let one = Parallelism::new(1).unwrap();
        assert_eq!(one.threads(), 1);
        assert_eq!(one.install(rayon::current_num_threads), 1);
        let sum: u64 = Parallelism::new(4)
            .unwrap()
            .install(|| (0..1000u64).into_par_iter().sum());
        assert_eq!(sum, 499_500);
    }
}
