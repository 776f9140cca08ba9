//! Worker-pool evaluation of prepared sweeps.

use rayon::prelude::*;

use scarmps_core::sweep::{PointResult, SweepPlan, SweepResult};

use crate::error::{Result, ToolError};

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    builder
        .build()
        .map_err(|e| ToolError::usage(format!("cannot start worker pool: {e}")))
}

/// Evaluates every grid point on a bounded pool; results come back in grid
/// order and are identical to the sequential run.
pub fn evaluate_plan(plan: &SweepPlan, workers: Option<usize>) -> Result<Vec<PointResult>> {
    let results: Vec<_> =
        pool(workers)?.install(|| (0..plan.len()).into_par_iter().map(|i| plan.evaluate(i)).collect());
    results.into_iter().map(|r| r.map_err(ToolError::from)).collect()
}

pub fn run_plan(plan: SweepPlan, workers: Option<usize>) -> Result<SweepResult> {
    let points = evaluate_plan(&plan, workers)?;
    Ok(SweepResult {
        config: plan.config,
        points,
        chain_steps: plan.chain_steps,
    })
}

/// Maps `f` over `items` on a bounded pool, keeping the input order.
pub fn map_ordered<T, U, F>(items: &[T], workers: Option<usize>, f: F) -> Result<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Result<U> + Sync + Send,
{
    pool(workers)?.install(|| items.par_iter().map(&f).collect())
}
