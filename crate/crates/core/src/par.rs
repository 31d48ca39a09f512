//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature off, [`Exec::Parallel`] quietly runs
//! sequentially, so callers never need their own `cfg` branches.

/// How a batch of independent work items is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

/// `items.iter().map(f).collect()`, in input order regardless of `exec`.
pub fn map_collect<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel if items.len() > 1 => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Runs `f` on a pool of `jobs` worker threads (the global pool if `jobs`
/// is 0). Without the `parallel` feature this just calls `f`.
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(f);
            }
        }
    }
    let _ = jobs;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = map_collect(Exec::Sequential, &items, |x| x * 3);
        let par = map_collect(Exec::Parallel, &items, |x| x * 3);
        assert_eq!(seq, par);
        assert_eq!(with_jobs(2, || map_collect(Exec::Parallel, &items, |x| x + 1))[999], 1000);
    }
}
