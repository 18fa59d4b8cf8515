use rayon::prelude::*;
use rayon::ThreadPool;

use cv2x_mec::engine::{replication_stats, AggregateAccumulator, AggregateStats, SimulationPlan};

use crate::error::SimError;

/// Fans replications out over a rayon pool and merges their statistics in
/// replication order, so results do not depend on the worker count.
#[derive(Default)]
pub struct Runner {
    pool: Option<ThreadPool>,
}

impl Runner {
    /// `workers = None` uses the global rayon pool.
    pub fn new(workers: Option<usize>) -> Result<Self, SimError> {
        let pool = match workers {
            None => None,
            Some(n) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| SimError::Runtime(format!("thread pool: {e}")))?,
            ),
        };
        Ok(Self { pool })
    }

    pub fn run(&self, plan: &SimulationPlan) -> Result<AggregateStats, cv2x_mec::Error> {
        plan.validate()?;
        let work = || {
            (0..plan.replications)
                .into_par_iter()
                .map(|r| replication_stats(plan, r))
                .collect::<Result<Vec<_>, _>>()
        };
        let parts = match &self.pool {
            Some(pool) => pool.install(work),
            None => work(),
        }?;
        let mut acc = AggregateAccumulator::default();
        for p in &parts {
            acc.merge(p);
        }
        acc.finish()
    }
}
