//! Shared search machinery.
//!
//! Every searcher in this crate is phrased as a lazy stream of candidates in
//! a canonical order plus a pure acceptance test. [`run_search`] consumes
//! the stream in batches, tests each batch in parallel and keeps the
//! accepted candidate with the smallest position in the stream, so the
//! result never depends on the number of workers.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use parking_lot::Mutex;
use rayon::prelude::*;

use crate::coloring::Color;
use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest depth (the `N` of a hypercube or point space) to enumerate.
    pub max_n: usize,
    /// Maximum number of candidates tested.
    pub max_nodes: u64,
    pub wall_time: Option<Duration>,
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_n: 12,
            max_nodes: 1_000_000,
            wall_time: None,
            workers: 0,
        }
    }
}

impl SearchBudget {
    pub fn with_max_nodes(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_max_n(mut self, max_n: usize) -> Self {
        self.max_n = max_n;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    fn effective_workers(&self) -> usize {
        if self.workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.workers
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExhaustReason {
    /// The node budget ran out.
    Nodes,
    /// Every candidate up to `max_n` was tested.
    Depth,
    Timeout,
}

/// The search frontier reached when a search ends without a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhausted {
    pub nodes_visited: u64,
    pub max_n_reached: usize,
    pub reason: ExhaustReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<W> {
    Found { witness: W, nodes_visited: u64 },
    Exhausted(Exhausted),
}

impl<W> SearchOutcome<W> {
    pub fn found(self) -> Option<W> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            SearchOutcome::Exhausted(_) => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn nodes_visited(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes_visited, .. } => *nodes_visited,
            SearchOutcome::Exhausted(e) => e.nodes_visited,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> SearchOutcome<V> {
        match self {
            SearchOutcome::Found { witness, nodes_visited } => SearchOutcome::Found {
                witness: f(witness),
                nodes_visited,
            },
            SearchOutcome::Exhausted(e) => SearchOutcome::Exhausted(e),
        }
    }
}

/// Candidates report the depth they belong to so the engine can enforce
/// `max_n` and report the frontier.
pub trait Staged {
    fn stage(&self) -> usize;
}

const BATCH_PER_WORKER: usize = 16;

/// Tests candidates in stream order and returns the first accepted one
/// together with the acceptance payload.
pub fn run_search<C, T, I, F>(candidates: I, accept: F, budget: &SearchBudget) -> SearchOutcome<(C, T)>
where
    I: IntoIterator<Item = C>,
    C: Staged + Send + Sync,
    T: Send,
    F: Fn(&C) -> Option<T> + Sync,
{
    let started = Instant::now();
    let workers = budget.effective_workers();
    let pool = if workers > 1 {
        rayon::ThreadPoolBuilder::new().num_threads(workers).build().ok()
    } else {
        None
    };
    let batch_size = if pool.is_some() { workers * BATCH_PER_WORKER } else { 1 };

    let max_n = budget.max_n;
    let mut stream = candidates
        .into_iter()
        .take_while(|c| c.stage() <= max_n)
        .take(usize::try_from(budget.max_nodes).unwrap_or(usize::MAX));
    let mut visited: u64 = 0;
    let mut frontier = 0usize;
    let mut batch: Vec<C> = Vec::with_capacity(batch_size);

    loop {
        if let Some(limit) = budget.wall_time {
            if started.elapsed() >= limit {
                return SearchOutcome::Exhausted(Exhausted {
                    nodes_visited: visited,
                    max_n_reached: frontier,
                    reason: ExhaustReason::Timeout,
                });
            }
        }
        batch.clear();
        batch.extend(stream.by_ref().take(batch_size));
        if batch.is_empty() {
            let reason = if visited >= budget.max_nodes {
                ExhaustReason::Nodes
            } else {
                ExhaustReason::Depth
            };
            return SearchOutcome::Exhausted(Exhausted {
                nodes_visited: visited,
                max_n_reached: frontier,
                reason,
            });
        }

        let hit = match &pool {
            Some(pool) => pool.install(|| test_batch_parallel(&batch, &accept)),
            None => batch.iter().enumerate().find_map(|(i, c)| accept(c).map(|t| (i, t))),
        };
        match hit {
            Some((index, payload)) => {
                let nodes_visited = visited + index as u64 + 1;
                let witness = batch.swap_remove(index);
                return SearchOutcome::Found {
                    witness: (witness, payload),
                    nodes_visited,
                };
            }
            None => {
                visited += batch.len() as u64;
                frontier = frontier.max(batch.last().map_or(0, Staged::stage));
            }
        }
    }
}

fn test_batch_parallel<C, T, F>(batch: &[C], accept: &F) -> Option<(usize, T)>
where
    C: Sync,
    T: Send,
    F: Fn(&C) -> Option<T> + Sync,
{
    let best = AtomicUsize::new(usize::MAX);
    batch
        .par_iter()
        .enumerate()
        .filter_map(|(i, c)| {
            // only candidates after the current best may be skipped
            if i > best.load(Ordering::Relaxed) {
                return None;
            }
            let payload = accept(c)?;
            best.fetch_min(i, Ordering::Relaxed);
            Some((i, payload))
        })
        .min_by_key(|(i, _)| *i)
}

/// Bounded memo of color evaluations keyed on the reduced rational.
pub struct ColorCache {
    map: Mutex<HashMap<Rational, Color>>,
    capacity: usize,
}

impl ColorCache {
    pub fn new(capacity: usize) -> Self {
        ColorCache {
            map: Mutex::new(HashMap::new()),
            capacity,
        }
    }

    pub fn get_or_insert_with(&self, key: &Rational, compute: impl FnOnce() -> Color) -> Color {
        if let Some(&c) = self.map.lock().get(key) {
            return c;
        }
        let c = compute();
        let mut map = self.map.lock();
        if map.len() >= self.capacity {
            map.clear();
        }
        map.insert(key.clone(), c);
        c
    }

    pub fn len(&self) -> usize {
        self.map.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for ColorCache {
    fn default() -> Self {
        ColorCache::new(1 << 16)
    }
}
