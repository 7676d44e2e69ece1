//! Parallel priority structures for lazy greedy seed selection: an ordered
//! score tree with rank-split and batch-insert, and an implicit-array winning
//! tree with pruned parallel search.
//!
//! Everything orders candidates by [`ScoreKey`]: score descending, vertex id
//! ascending. Baking the tie-break into one total order is what makes the
//! sequential, batch, and tournament selectors agree exactly.

mod max_cell;
mod ost;
mod wintree;

pub use max_cell::MaxCell;
pub use ost::OrderedScoreTree;
pub use wintree::WinTree;

/// Stale score of a removed seed (and of winning-tree padding slots);
/// strictly below every real score, which is a nonnegative integer sum.
pub const SEED_SENTINEL_SCORE: i64 = -1;

/// A candidate's (stale score, vertex id) under the selection order.
///
/// `a > b` means `a` is the better candidate: higher score, or equal score
/// and smaller id. Distinct ids make the order total with no equal keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoreKey {
    /// Marginal-gain estimate as an exact integer sum over sketches.
    pub score: i64,
    pub id: u32,
}

impl ScoreKey {
    /// The minimum of the total order; loses to every real key.
    pub const MIN: ScoreKey = ScoreKey {
        score: i64::MIN,
        id: u32::MAX,
    };
}

impl Ord for ScoreKey {
    #[inline]
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.score
            .cmp(&other.score)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for ScoreKey {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Errors from the ordered score tree.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PqueueError {
    #[error("duplicate vertex id {0} in ordered score tree")]
    DuplicateId(u32),
}
