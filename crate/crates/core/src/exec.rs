//! Bounded worker pool for independent scan items.
//!
//! With the `parallel` feature (default) work items run on a dedicated rayon
//! pool; without it every executor is sequential. Results always come back in
//! input order, so output is identical either way.

#[cfg(feature = "parallel")]
use std::sync::Arc;

#[derive(Clone, Default)]
pub struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl Executor {
    pub fn sequential() -> Self {
        Self::default()
    }

    /// `workers == 1` gives a sequential executor; `0` lets the pool pick
    /// its size from the available cores.
    pub fn new(workers: usize) -> Self {
        #[cfg(feature = "parallel")]
        {
            if workers != 1 {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(|i| format!("gbz-worker-{i}"))
                    .build()
                    .expect("failed to start worker pool");
                return Self {
                    pool: Some(Arc::new(pool)),
                };
            }
        }
        let _ = workers;
        Self::sequential()
    }

    pub fn workers(&self) -> usize {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            return pool.current_num_threads();
        }
        1
    }

    pub fn is_parallel(&self) -> bool {
        self.workers() > 1
    }

    /// Applies `f` to every item, preserving order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("workers", &self.workers())
            .finish()
    }
}
