//! Exhaustive searches for extremal digraphs.
//!
//! [`enumerate`] walks every labeled digraph of a space (subject to the
//! task's mode), keeps those meeting the constraints, and reports the
//! extremal value with its isomorphism classes. Work is split into shards
//! that run on a rayon pool and merge in a fixed order, so reports do not
//! depend on the thread count.

mod checkpoint;
mod engine;
mod report;
mod tally;
mod task;

use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

pub use checkpoint::{checkpoint_location, Checkpoint, ShardState, CHECKPOINT_DIR_ENV, CHECKPOINT_VERSION};
pub use engine::{Leaf, PruningStats, ShardKey, Visitor};
pub use report::{
    adm_hash, classify_extremal, verify_witness, ExtremalCertificate, IsoClass, SearchReport, WitnessVerdict,
};
pub use tally::Tally;
pub use task::{
    BipartiteConstraint, Constraints, Mode, Objective, SearchTask, FULL_MODE_BITS, MAX_DIGRAPH_ORDER,
    MAX_RESTRICTED_ORDER,
};

use crate::digraph::DenseDigraph;
use crate::error::DigraphError;
use engine::{run_shard, Plan};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid task: {0}")]
    Invalid(String),
    #[error("task is outside the feasible range: {0}")]
    Infeasible(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

const PROGRESS_INTERVAL: u64 = 1 << 20;
const SAVE_EVERY: Duration = Duration::from_secs(30);

/// Runs a task to completion, resuming from its checkpoint if present.
pub fn enumerate(task: &SearchTask) -> Result<SearchReport, SearchError> {
    Ok(drive(task, None)?.expect("unbounded run completes"))
}

/// Runs at most `leaves_per_shard` leaves in every unfinished shard, then
/// saves the checkpoint. Returns the report once every shard is done.
pub fn enumerate_partial(task: &SearchTask, leaves_per_shard: u64) -> Result<Option<SearchReport>, SearchError> {
    if checkpoint_location(task).is_none() {
        return Err(SearchError::Invalid("a partial run needs a checkpoint path".into()));
    }
    drive(task, Some(leaves_per_shard.max(1)))
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, SearchError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SearchError::Invalid(format!("thread pool: {e}")))
}

fn drive(task: &SearchTask, budget: Option<u64>) -> Result<Option<SearchReport>, SearchError> {
    task.validate()?;
    let start = Instant::now();
    let plan = Plan::new(task);
    let keys = plan.shards();
    let n = task.n;
    let fingerprint = task.fingerprint();
    let location = checkpoint_location(task);

    let fresh = |key| ShardState {
        key,
        cursor: vec![0; n - 1],
        done: false,
        examined: 0,
        stats: PruningStats::default(),
        tally: Tally::new(task.objective, n),
    };
    let states = match location.as_deref().map(Checkpoint::load).transpose()?.flatten() {
        Some(cp) => {
            if cp.fingerprint != fingerprint {
                return Err(SearchError::Checkpoint("checkpoint belongs to a different task".into()));
            }
            if cp.shards.len() != keys.len() || cp.shards.iter().zip(&keys).any(|(s, k)| s.key != *k) {
                return Err(SearchError::Checkpoint("checkpoint shard layout does not match".into()));
            }
            cp.shards
        }
        None => keys.iter().map(|&k| fresh(k)).collect(),
    };

    let shared = Mutex::new((states, Instant::now()));
    let save = |states: &[ShardState]| -> Result<(), SearchError> {
        if let Some(path) = &location {
            Checkpoint {
                version: CHECKPOINT_VERSION,
                fingerprint: fingerprint.clone(),
                shards: states.to_vec(),
            }
            .save(path)?;
        }
        Ok(())
    };

    let todo: Vec<usize> = {
        let guard = shared.lock().expect("lock");
        (0..keys.len()).filter(|&i| !guard.0[i].done).collect()
    };
    let results: Vec<Result<(), SearchError>> = pool(task.threads)?.install(|| {
        todo.par_iter()
            .map(|&i| {
                let mut st = shared.lock().expect("lock").0[i].clone();
                let progress = |cursor: &[usize], tally: &Tally, stats: &PruningStats, examined: u64| {
                    if location.is_none() {
                        return;
                    }
                    let mut guard = shared.lock().expect("lock");
                    if guard.1.elapsed() < SAVE_EVERY {
                        return;
                    }
                    let mut t = tally.clone();
                    t.flush();
                    let entry = &mut guard.0[i];
                    entry.cursor = cursor.to_vec();
                    entry.examined = examined;
                    entry.stats = *stats;
                    entry.tally = t;
                    guard.1 = Instant::now();
                    let _ = save(&guard.0);
                };
                let base = st.examined;
                let mut stats = st.stats;
                let run = run_shard(
                    &plan,
                    st.key,
                    &st.cursor,
                    &mut st.tally,
                    &mut stats,
                    budget,
                    PROGRESS_INTERVAL,
                    &mut |c, t, s, e| progress(c, t, s, base + e),
                );
                st.tally.flush();
                st.examined = base + run.examined;
                st.stats = stats;
                st.cursor = run.cursor;
                st.done = run.done;
                let mut guard = shared.lock().expect("lock");
                guard.0[i] = st;
                Ok(())
            })
            .collect()
    });
    results.into_iter().collect::<Result<(), _>>()?;

    let (states, _) = shared.into_inner().expect("lock");
    save(&states)?;
    if states.iter().any(|s| !s.done) {
        return Ok(None);
    }

    let mut tally = Tally::new(task.objective, n);
    let mut pruning = PruningStats {
        rows_filtered: plan.spaces.iter().map(|s| s.rows_filtered).sum(),
        ..Default::default()
    };
    let mut examined = 0;
    for s in states {
        examined += s.examined;
        pruning.add(&s.stats);
        tally.merge(s.tally);
    }
    let mut canon: Vec<DenseDigraph> = tally
        .classes
        .iter()
        .map(|rows| DenseDigraph::from_rows(n, rows).expect("canonical rows are valid"))
        .collect();
    canon.sort();
    let iso_classes = canon.iter().map(IsoClass::new).collect();
    let extremal_value = match task.objective {
        Objective::CountExtremal => Some(tally.labeled),
        _ => tally.best,
    };
    Ok(Some(SearchReport {
        task: task.clone(),
        candidates_examined: examined,
        extremal_value,
        extremal_labeled_count: tally.labeled,
        iso_classes,
        wall_time_ms: start.elapsed().as_millis() as u64,
        pruning,
    }))
}

/// Totals from [`scan`].
pub struct ScanResult<V> {
    pub visitor: V,
    pub examined: u64,
    pub pruning: PruningStats,
}

/// Runs a task with a custom fold instead of the objective tally. The
/// objective is ignored; checkpoints are not used.
pub fn scan<V, F>(task: &SearchTask, make: F) -> Result<ScanResult<V>, SearchError>
where
    V: Visitor,
    F: Fn() -> V + Sync,
{
    task.validate()?;
    let plan = Plan::new(task);
    let keys = plan.shards();
    let cursor = vec![0; task.n - 1];
    let parts: Vec<(V, u64, PruningStats)> = pool(task.threads)?.install(|| {
        keys.par_iter()
            .map(|&key| {
                let mut v = make();
                let mut stats = PruningStats::default();
                let run = run_shard(
                    &plan,
                    key,
                    &cursor,
                    &mut v,
                    &mut stats,
                    None,
                    u64::MAX,
                    &mut |_, _, _, _| {},
                );
                (v, run.examined, stats)
            })
            .collect()
    });
    let mut visitor = make();
    let mut examined = 0;
    let mut pruning = PruningStats {
        rows_filtered: plan.spaces.iter().map(|s| s.rows_filtered).sum(),
        ..Default::default()
    };
    for (v, e, s) in parts {
        visitor.merge(v);
        examined += e;
        pruning.add(&s);
    }
    Ok(ScanResult {
        visitor,
        examined,
        pruning,
    })
}
