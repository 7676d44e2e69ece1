//! Seed selection drivers over a shared sketch set.
//!
//! Four interchangeable selectors produce identical ordered seed lists on the
//! same sketches: an exhaustive greedy (the correctness oracle), sequential
//! lazy greedy (CELF), prefix-doubling batch selection over the ordered score
//! tree, and pruned parallel search over the winning tree. Agreement follows
//! from submodularity of the estimator plus the single [`ScoreKey`] total
//! order used for every accept, stop, and tie decision.
//!
//! Rounds are sequential; within a round, evaluations run as fork-join tasks
//! and never observe a half-applied seed (`mark_seed` needs `&mut` on the
//! sketch set, so the round barrier is enforced by the borrow checker).

use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicI64, Ordering};

use rayon::prelude::*;

use crate::pqueue::{MaxCell, OrderedScoreTree, ScoreKey, WinTree, SEED_SENTINEL_SCORE};
use crate::sketch::SketchSet;

/// Which selector to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exhaustive,
    Celf,
    Ptree,
    Wintree,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Exhaustive,
        Method::Celf,
        Method::Ptree,
        Method::Wintree,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Exhaustive => "exhaustive",
            Method::Celf => "celf",
            Method::Ptree => "ptree",
            Method::Wintree => "wintree",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.iter().copied().find(|m| m.name() == s)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SelectError {
    #[error("k = {k} out of range: need 1 <= k <= n = {n}")]
    InvalidK { k: usize, n: usize },
    #[error(transparent)]
    Pqueue(#[from] crate::pqueue::PqueueError),
}

/// Lazily maintained stale scores: `delta[v]` is always an upper bound of
/// `v`'s true marginal gain (submodularity), refreshed on evaluation and set
/// to the sentinel when `v` becomes a seed. Atomic because winning-tree
/// rounds refresh entries from parallel tasks (one writer per vertex per
/// round).
pub struct StaleScores {
    delta: Vec<AtomicI64>,
}

impl StaleScores {
    /// Evaluates `Marginal(empty-set, v)` for every vertex in parallel. The
    /// `n` evaluations are credited to the initial phase by the caller's
    /// counter snapshot, not to any selection round.
    pub fn init(set: &SketchSet) -> StaleScores {
        let delta: Vec<AtomicI64> = (0..set.n() as u32)
            .into_par_iter()
            .map(|v| AtomicI64::new(set.marginal_sum(v) as i64))
            .collect();
        StaleScores { delta }
    }

    #[inline]
    pub fn get(&self, v: u32) -> i64 {
        self.delta[v as usize].load(Ordering::Relaxed)
    }

    #[inline]
    pub fn set(&self, v: u32, score: i64) {
        self.delta[v as usize].store(score, Ordering::Relaxed);
    }

    #[inline]
    pub fn key(&self, v: u32) -> ScoreKey {
        ScoreKey {
            score: self.get(v),
            id: v,
        }
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }
}

/// Ordered seeds with their true marginal gains and evaluation accounting.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SeedResult {
    pub method: Method,
    pub seeds: Vec<u32>,
    /// True marginal gain at selection time, as the exact integer sum over
    /// sketches.
    pub gain_sums: Vec<u64>,
    /// `gain_sums / R`, for reporting.
    pub gains: Vec<f64>,
    /// Marginal calls spent computing the initial scores (always `n`).
    pub initial_evaluations: u64,
    /// Marginal calls per selection round, excluding the initial scoring.
    pub round_evaluations: Vec<u64>,
    /// BFS visits spent on the initial scoring.
    pub initial_bfs_visits: u64,
    /// Total BFS visits across the whole run, initial scoring included.
    pub bfs_visits: u64,
}

impl SeedResult {
    pub fn total_round_evaluations(&self) -> u64 {
        self.round_evaluations.iter().sum()
    }

    /// BFS visits after the initial scoring (selection rounds, seed marking
    /// included).
    pub fn round_bfs_visits(&self) -> u64 {
        self.bfs_visits - self.initial_bfs_visits
    }
}

/// Runs the chosen selector for `k` seeds on a fresh sketch set.
pub fn select(set: &mut SketchSet, k: usize, method: Method) -> Result<SeedResult, SelectError> {
    let n = set.n();
    if k == 0 || k > n {
        return Err(SelectError::InvalidK { k, n });
    }
    match method {
        Method::Exhaustive => select_exhaustive(set, k),
        Method::Celf => select_celf(set, k),
        Method::Ptree => select_ptree(set, k),
        Method::Wintree => select_wintree(set, k),
    }
}

struct Recorder {
    method: Method,
    r_count: u32,
    seeds: Vec<u32>,
    gain_sums: Vec<u64>,
    round_evaluations: Vec<u64>,
    initial_evaluations: u64,
    initial_bfs_visits: u64,
}

impl Recorder {
    fn new(set: &SketchSet, method: Method, k: usize) -> Recorder {
        Recorder {
            method,
            r_count: set.r_count(),
            seeds: Vec::with_capacity(k),
            gain_sums: Vec::with_capacity(k),
            round_evaluations: Vec::with_capacity(k),
            initial_evaluations: 0,
            initial_bfs_visits: 0,
        }
    }

    fn record_round(&mut self, seed: u32, gain_sum: u64, evals: u64) {
        debug_assert!(
            self.gain_sums.last().map_or(true, |&prev| gain_sum <= prev),
            "gains must be nonincreasing"
        );
        self.seeds.push(seed);
        self.gain_sums.push(gain_sum);
        self.round_evaluations.push(evals);
    }

    fn finish(self, set: &SketchSet) -> SeedResult {
        let gains = self
            .gain_sums
            .iter()
            .map(|&s| s as f64 / self.r_count as f64)
            .collect();
        SeedResult {
            method: self.method,
            seeds: self.seeds,
            gain_sums: self.gain_sums,
            gains,
            initial_evaluations: self.initial_evaluations,
            round_evaluations: self.round_evaluations,
            initial_bfs_visits: self.initial_bfs_visits,
            bfs_visits: set.stats().bfs_visits(),
        }
    }
}

/// Exhaustive greedy: every round evaluates every non-seed vertex. The
/// correctness oracle for the three lazy selectors.
fn select_exhaustive(set: &mut SketchSet, k: usize) -> Result<SeedResult, SelectError> {
    let n = set.n() as u32;
    let mut rec = Recorder::new(set, Method::Exhaustive, k);

    let before = set.stats().marginal_calls();
    let init = StaleScores::init(set);
    rec.initial_evaluations = set.stats().marginal_calls() - before;
    rec.initial_bfs_visits = set.stats().bfs_visits();

    // Round 1 is the initial scoring itself.
    let first = (0..n)
        .map(|v| init.key(v))
        .max()
        .expect("k <= n implies a nonempty graph");
    set.mark_seed(first.id);
    rec.record_round(first.id, first.score as u64, 0);

    for _ in 1..k {
        let before = set.stats().marginal_calls();
        let best = (0..n)
            .into_par_iter()
            .filter(|&v| !set.is_seed(v))
            .map(|v| ScoreKey {
                score: set.marginal_sum(v) as i64,
                id: v,
            })
            .max()
            .expect("non-seed vertices remain while k <= n");
        let evals = set.stats().marginal_calls() - before;
        set.mark_seed(best.id);
        rec.record_round(best.id, best.score as u64, evals);
    }
    Ok(rec.finish(set))
}

/// Sequential CELF: pop the top candidate, re-evaluate, accept when the fresh
/// key strictly beats the queue top, else reinsert. The inner marginal still
/// parallelizes over sketches.
fn select_celf(set: &mut SketchSet, k: usize) -> Result<SeedResult, SelectError> {
    let n = set.n() as u32;
    let mut rec = Recorder::new(set, Method::Celf, k);

    let before = set.stats().marginal_calls();
    let init = StaleScores::init(set);
    rec.initial_evaluations = set.stats().marginal_calls() - before;
    rec.initial_bfs_visits = set.stats().bfs_visits();

    let mut queue: BinaryHeap<ScoreKey> = (0..n).map(|v| init.key(v)).collect();
    for _ in 0..k {
        let before = set.stats().marginal_calls();
        let accepted = loop {
            let top = queue.pop().expect("queue holds all non-seed vertices");
            let fresh = ScoreKey {
                score: set.marginal_sum(top.id) as i64,
                id: top.id,
            };
            match queue.peek() {
                Some(&next) if fresh <= next => queue.push(fresh),
                _ => break fresh, // strictly better than the rest, or queue empty
            }
        };
        let evals = set.stats().marginal_calls() - before;
        set.mark_seed(accepted.id);
        rec.record_round(accepted.id, accepted.score as u64, evals);
    }
    Ok(rec.finish(set))
}

/// Prefix-doubling selection over the ordered score tree: extract the top
/// 1, 2, 4, ... stale keys, re-evaluate each batch in parallel, and stop once
/// the best fresh key beats everything left in the tree. Evaluates at most
/// twice as many vertices as CELF.
fn select_ptree(set: &mut SketchSet, k: usize) -> Result<SeedResult, SelectError> {
    let n = set.n() as u32;
    let mut rec = Recorder::new(set, Method::Ptree, k);

    let before = set.stats().marginal_calls();
    let init = StaleScores::init(set);
    rec.initial_evaluations = set.stats().marginal_calls() - before;
    rec.initial_bfs_visits = set.stats().bfs_visits();

    let keys: Vec<ScoreKey> = (0..n).map(|v| init.key(v)).collect();
    let mut tree = OrderedScoreTree::build(&keys)?;

    for _ in 0..k {
        let before = set.stats().marginal_calls();
        let mut evaluated: Vec<ScoreKey> = Vec::new();
        let mut best: Option<ScoreKey> = None;
        let mut batch_size = 1usize;
        loop {
            let batch = tree.split_and_remove(batch_size);
            if batch.is_empty() {
                break; // tree exhausted: accept the running best
            }
            let fresh: Vec<ScoreKey> = batch
                .par_iter()
                .map(|key| ScoreKey {
                    score: set.marginal_sum(key.id) as i64,
                    id: key.id,
                })
                .collect();
            for key in fresh {
                evaluated.push(key);
                if best.is_none_or(|b| key > b) {
                    best = Some(key);
                }
            }
            match tree.max() {
                None => break,
                Some(top) => {
                    if best.expect("batch was nonempty") > top {
                        break;
                    }
                }
            }
            batch_size *= 2;
        }
        let seed = best.expect("at least one vertex was evaluated");
        let back: Vec<ScoreKey> = evaluated.into_iter().filter(|key| key.id != seed.id).collect();
        tree.batch_insert(&back)?;
        let evals = set.stats().marginal_calls() - before;
        set.mark_seed(seed.id);
        rec.record_round(seed.id, seed.score as u64, evals);
    }
    Ok(rec.finish(set))
}

/// Winning-tree selection: one pruned parallel `find_max` per round, then
/// sentinel out the seed and rewrite its leaf-to-root path.
fn select_wintree(set: &mut SketchSet, k: usize) -> Result<SeedResult, SelectError> {
    let mut rec = Recorder::new(set, Method::Wintree, k);

    let before = set.stats().marginal_calls();
    let scores = StaleScores::init(set);
    rec.initial_evaluations = set.stats().marginal_calls() - before;
    rec.initial_bfs_visits = set.stats().bfs_visits();

    let score_of = |v: u32| scores.get(v);
    let tree = WinTree::build(set.n(), &score_of);
    let best = MaxCell::new();

    for _ in 0..k {
        best.reset();
        let before = set.stats().marginal_calls();
        let seed = {
            let evaluate = |v: u32| {
                debug_assert!(!set.is_seed(v), "pruning must skip seeds");
                let fresh = set.marginal_sum(v) as i64;
                scores.set(v, fresh);
                fresh
            };
            tree.find_max(&score_of, &best, &evaluate)
        };
        let evals = set.stats().marginal_calls() - before;
        let top = best.load();
        debug_assert_eq!(top.id, seed, "best cell must converge to the root");

        scores.set(seed, SEED_SENTINEL_SCORE);
        tree.rewrite_path(seed, &score_of);
        set.mark_seed(seed);
        rec.record_round(seed, top.score as u64, evals);
    }
    Ok(rec.finish(set))
}
