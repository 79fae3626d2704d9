//! Order-preserving data-parallel map over index ranges.
//!
//! With the `parallel` feature (on by default) work runs on a dedicated rayon
//! pool sized by the worker count; without it, or with one worker, every map
//! runs on the calling thread. Results are always returned in index order, so
//! output never depends on the worker count.

use std::ops::Range;

use crate::error::{Error, Result};

/// Environment variable that overrides any configured worker count.
pub const WORKERS_ENV: &str = "RM_PMEPR_WORKERS";

#[derive(Clone)]
pub struct Executor {
    workers: usize,
    #[cfg(feature = "parallel")]
    pool: Option<std::sync::Arc<rayon::ThreadPool>>,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor").field("workers", &self.workers).finish()
    }
}

impl Default for Executor {
    fn default() -> Self {
        Self::sequential()
    }
}

impl Executor {
    pub fn sequential() -> Self {
        Self {
            workers: 1,
            #[cfg(feature = "parallel")]
            pool: None,
        }
    }

    /// `workers = 0` means one per available core.
    pub fn new(workers: usize) -> Result<Self> {
        let workers = if workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            workers
        };
        if workers == 1 {
            return Ok(Self::sequential());
        }
        #[cfg(feature = "parallel")]
        {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(Self { workers, pool: Some(std::sync::Arc::new(pool)) })
        }
        #[cfg(not(feature = "parallel"))]
        {
            Ok(Self { workers })
        }
    }

    /// Worker count from [`WORKERS_ENV`] if set, else `configured`.
    pub fn from_env(configured: usize) -> Result<Self> {
        match std::env::var(WORKERS_ENV) {
            Ok(v) => {
                let n = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("{WORKERS_ENV}={v:?} is not a worker count")))?;
                Self::new(n)
            }
            Err(_) => Self::new(configured),
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn is_parallel(&self) -> bool {
        #[cfg(feature = "parallel")]
        {
            self.pool.is_some()
        }
        #[cfg(not(feature = "parallel"))]
        {
            false
        }
    }

    pub fn map<R, F>(&self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        self.map_init(range, || (), |_, i| f(i))
    }

    /// Like [`Executor::map`] with per-worker scratch state built by `init`.
    pub fn map_init<S, R, I, F>(&self, range: Range<usize>, init: I, f: F) -> Vec<R>
    where
        R: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| range.into_par_iter().map_init(&init, |s, i| f(s, i)).collect());
        }
        let mut state = init();
        range.map(|i| f(&mut state, i)).collect()
    }

    pub fn try_map_init<S, R, I, F>(&self, range: Range<usize>, init: I, f: F) -> Result<Vec<R>>
    where
        R: Send,
        I: Fn() -> Result<S> + Sync + Send,
        F: Fn(&mut S, usize) -> Result<R> + Sync + Send,
    {
        self.map_init(range, init, |s, i| match s {
            Ok(state) => f(state, i),
            Err(e) => Err(e.clone()),
        })
        .into_iter()
        .collect()
    }
}
