//! Parallel execution of counting plans with heartbeat lines on stderr.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use picardkit_core::counting::{CountError, CountPlan, Executor};
use rayon::prelude::*;

/// Runs work items on a rayon pool. Results are summed in item order, so
/// the count does not depend on the number of threads.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
    heartbeat: Option<Duration>,
}

impl RayonExecutor {
    /// `threads = 0` uses rayon's default.
    pub fn new(threads: usize, heartbeat: Option<Duration>) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(RayonExecutor { pool, heartbeat })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn execute(&self, plan: &CountPlan) -> Result<u64, CountError> {
        let items = plan.work_items(4 * self.threads() as u64);
        let done = AtomicU64::new(0);
        let finished = AtomicBool::new(false);
        let total = items.len() as u64;
        std::thread::scope(|s| {
            if let Some(every) = self.heartbeat {
                let (done, finished) = (&done, &finished);
                s.spawn(move || {
                    let start = Instant::now();
                    let mut next = every;
                    while !finished.load(Ordering::Relaxed) {
                        std::thread::sleep(Duration::from_millis(50));
                        if start.elapsed() >= next {
                            eprintln!(
                                "picardkit: counting over F_{}: {}/{} work items, {:.0}s",
                                plan.field_size(),
                                done.load(Ordering::Relaxed),
                                total,
                                start.elapsed().as_secs_f64()
                            );
                            next += every;
                        }
                    }
                });
            }
            let parts: Vec<Result<u64, CountError>> = self.pool.install(|| {
                items
                    .par_iter()
                    .map(|it| {
                        let r = plan.run_item(it);
                        done.fetch_add(1, Ordering::Relaxed);
                        r
                    })
                    .collect()
            });
            finished.store(true, Ordering::Relaxed);
            let mut sum: u64 = 0;
            for p in parts {
                sum = sum.checked_add(p?).ok_or(CountError::Overflow)?;
            }
            Ok(sum)
        })
    }
}
