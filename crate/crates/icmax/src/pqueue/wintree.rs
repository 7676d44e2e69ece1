//! Implicit-array winning (tournament) tree with pruned parallel search.
//!
//! Leaves hold vertex ids; every interior node holds whichever child id has
//! the larger [`ScoreKey`]. The array is 1-indexed with children at `2t` and
//! `2t + 1`, padded with sentinel leaves to a power of two so the index
//! arithmetic is branch-free. No pointers, no metadata: `2n' - 1` id words.
//!
//! `find_max` walks the tree top-down. A node is *stale* when it is the root
//! or its id differs from its parent's (an equal id was just re-evaluated at
//! the parent). A stale node whose key is below the shared best is pruned
//! with its whole subtree: every leaf under it has a stale key at most the
//! node's, and true scores never exceed stale ones. A stale node that
//! survives the check is re-evaluated and pushed into the best cell; children
//! are then explored in parallel, and on the way out each node is rewritten
//! to its winning child. The root id after the walk is the vertex with the
//! largest *true* score, for any thread interleaving.

use std::sync::atomic::{AtomicU32, Ordering};

use super::{MaxCell, ScoreKey, SEED_SENTINEL_SCORE};

/// Subtrees with at most this many leaves are explored sequentially.
const PARALLEL_CUTOFF: usize = 512;

/// Winning tree over vertices `0..n`. Score lookups go through a caller
/// closure so the stale array stays owned by the selection driver.
pub struct WinTree {
    tree: Vec<AtomicU32>,
    leaves: usize,
    n: usize,
}

impl WinTree {
    /// Bottom-up O(n) build. `score_of` returns the stale score of a real
    /// vertex; padding slots rank below every real vertex.
    pub fn build(n: usize, score_of: &impl Fn(u32) -> i64) -> WinTree {
        assert!(n > 0, "winning tree needs at least one vertex");
        assert!(n <= u32::MAX as usize, "vertex ids must fit in 32 bits");
        let leaves = n.next_power_of_two();
        let tree: Vec<AtomicU32> = (0..2 * leaves).map(|_| AtomicU32::new(0)).collect();
        let wt = WinTree { tree, leaves, n };
        for i in 0..leaves {
            wt.tree[leaves + i].store(i as u32, Ordering::Relaxed);
        }
        for t in (1..leaves).rev() {
            let w = wt.winner(t, score_of);
            wt.tree[t].store(w, Ordering::Relaxed);
        }
        wt
    }

    #[inline]
    fn key_of(&self, id: u32, score_of: &impl Fn(u32) -> i64) -> ScoreKey {
        if (id as usize) < self.n {
            ScoreKey {
                score: score_of(id),
                id,
            }
        } else {
            ScoreKey {
                score: SEED_SENTINEL_SCORE,
                id,
            }
        }
    }

    #[inline]
    fn winner(&self, t: usize, score_of: &impl Fn(u32) -> i64) -> u32 {
        let l = self.tree[2 * t].load(Ordering::Relaxed);
        let r = self.tree[2 * t + 1].load(Ordering::Relaxed);
        if self.key_of(l, score_of) > self.key_of(r, score_of) {
            l
        } else {
            r
        }
    }

    /// Current root id (the argmax of stale keys after a build or rewrite,
    /// and of true scores after `find_max`).
    #[inline]
    pub fn root(&self) -> u32 {
        self.tree[1].load(Ordering::Relaxed)
    }

    /// Finds the vertex with the largest true score, re-evaluating lazily.
    ///
    /// `best` must hold [`ScoreKey::MIN`] on entry. `evaluate` refreshes the
    /// stale score of its argument to the true score and returns it; it is
    /// called at most once per vertex per round and only for vertices whose
    /// stale key was not pruned. On return the tree is a valid winning tree
    /// over the refreshed stale array.
    pub fn find_max<S, E>(&self, score_of: &S, best: &MaxCell, evaluate: &E) -> u32
    where
        S: Fn(u32) -> i64 + Sync,
        E: Fn(u32) -> i64 + Sync,
    {
        self.explore(1, None, self.leaves, score_of, best, evaluate, true);
        self.root()
    }

    /// `find_max` with pruning disabled: every stale node is re-evaluated.
    /// Reference path for prune-soundness tests; `evaluate` must then accept
    /// padding ids (`id >= n`) and removed seeds as well.
    pub fn find_max_unpruned<S, E>(&self, score_of: &S, best: &MaxCell, evaluate: &E) -> u32
    where
        S: Fn(u32) -> i64 + Sync,
        E: Fn(u32) -> i64 + Sync,
    {
        self.explore(1, None, self.leaves, score_of, best, evaluate, false);
        self.root()
    }

    #[allow(clippy::too_many_arguments)]
    fn explore<S, E>(
        &self,
        t: usize,
        parent_id: Option<u32>,
        span: usize,
        score_of: &S,
        best: &MaxCell,
        evaluate: &E,
        prune: bool,
    ) where
        S: Fn(u32) -> i64 + Sync,
        E: Fn(u32) -> i64 + Sync,
    {
        let id = self.tree[t].load(Ordering::Relaxed);
        let is_stale = parent_id != Some(id);
        if is_stale {
            if prune && self.key_of(id, score_of) < best.load() {
                return;
            }
            if (id as usize) < self.n || !prune {
                let score = evaluate(id);
                best.write_max(ScoreKey { score, id });
            }
        }
        if span == 1 {
            return;
        }
        let child_span = span / 2;
        if child_span > PARALLEL_CUTOFF {
            rayon::join(
                || self.explore(2 * t, Some(id), child_span, score_of, best, evaluate, prune),
                || {
                    self.explore(
                        2 * t + 1,
                        Some(id),
                        child_span,
                        score_of,
                        best,
                        evaluate,
                        prune,
                    )
                },
            );
        } else {
            self.explore(2 * t, Some(id), child_span, score_of, best, evaluate, prune);
            self.explore(2 * t + 1, Some(id), child_span, score_of, best, evaluate, prune);
        }
        // Ids are rewritten only after both child explorations join.
        let w = self.winner(t, score_of);
        self.tree[t].store(w, Ordering::Relaxed);
    }

    /// Re-runs the child comparisons on `v`'s leaf-to-root path. Called after
    /// a score change outside `find_max` (seed removal).
    pub fn rewrite_path(&self, v: u32, score_of: &impl Fn(u32) -> i64) {
        let mut t = (self.leaves + v as usize) / 2;
        while t >= 1 {
            let w = self.winner(t, score_of);
            self.tree[t].store(w, Ordering::Relaxed);
            if t == 1 {
                break;
            }
            t /= 2;
        }
    }

    /// Checks the heap property at every interior node.
    pub fn is_valid_heap(&self, score_of: &impl Fn(u32) -> i64) -> bool {
        (1..self.leaves).all(|t| {
            let id = self.tree[t].load(Ordering::Relaxed);
            let k = self.key_of(id, score_of);
            let l = self.tree[2 * t].load(Ordering::Relaxed);
            let r = self.tree[2 * t + 1].load(Ordering::Relaxed);
            id == self.winner(t, score_of)
                || (k >= self.key_of(l, score_of) && k >= self.key_of(r, score_of))
        })
    }
}
