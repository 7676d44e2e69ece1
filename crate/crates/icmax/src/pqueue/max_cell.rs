//! Shared write-max cell for the running best (score, id).

use portable_atomic::{AtomicU128, Ordering};

use super::ScoreKey;

/// A (score, id) pair is packed into a u128 so that the integer order of the
/// packing equals the [`ScoreKey`] total order; write-max is then a single
/// atomic `fetch_max` (a compare-and-update loop on platforms without a
/// native 128-bit CAS).
///
/// The cell is monotonically nondecreasing in the total order and ends at the
/// supremum of all submitted values, for any interleaving.
#[derive(Debug)]
pub struct MaxCell {
    packed: AtomicU128,
}

#[inline]
fn encode(key: ScoreKey) -> u128 {
    // Shift scores to unsigned so the packing is order-preserving; invert the
    // id so smaller ids encode larger.
    let score = (key.score as i128 - i64::MIN as i128) as u128;
    (score << 32) | (u32::MAX - key.id) as u128
}

#[inline]
fn decode(packed: u128) -> ScoreKey {
    ScoreKey {
        score: ((packed >> 32) as i128 + i64::MIN as i128) as i64,
        id: u32::MAX - (packed & u32::MAX as u128) as u32,
    }
}

impl MaxCell {
    /// A cell holding [`ScoreKey::MIN`].
    pub fn new() -> MaxCell {
        MaxCell {
            packed: AtomicU128::new(encode(ScoreKey::MIN)),
        }
    }

    /// Resets to [`ScoreKey::MIN`]. Callers reset between selection rounds.
    pub fn reset(&self) {
        self.packed.store(encode(ScoreKey::MIN), Ordering::Relaxed);
    }

    /// Replaces the stored key if `key` is greater under the total order.
    #[inline]
    pub fn write_max(&self, key: ScoreKey) {
        self.packed.fetch_max(encode(key), Ordering::Relaxed);
    }

    /// Current best.
    #[inline]
    pub fn load(&self) -> ScoreKey {
        decode(self.packed.load(Ordering::Relaxed))
    }
}

impl Default for MaxCell {
    fn default() -> Self {
        MaxCell::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_preserves_total_order() {
        let keys = [
            ScoreKey::MIN,
            ScoreKey { score: -1, id: 7 },
            ScoreKey { score: -1, id: 2 },
            ScoreKey { score: 0, id: u32::MAX },
            ScoreKey { score: 0, id: 0 },
            ScoreKey { score: 9, id: 1 },
            ScoreKey { score: i64::MAX, id: 0 },
        ];
        for a in keys {
            for b in keys {
                assert_eq!(encode(a).cmp(&encode(b)), a.cmp(&b), "{a:?} vs {b:?}");
                assert_eq!(decode(encode(a)), a);
            }
        }
    }

    #[test]
    fn converges_to_supremum_under_contention() {
        let cell = MaxCell::new();
        let n: u32 = 10_000;
        rayon::scope(|s| {
            for chunk in 0..8u32 {
                let cell = &cell;
                s.spawn(move |_| {
                    for i in (chunk..n).step_by(8) {
                        cell.write_max(ScoreKey {
                            score: (i % 997) as i64,
                            id: i,
                        });
                    }
                });
            }
        });
        let best = cell.load();
        // Supremum: max score 996, smallest id attaining it.
        let expect = (0..n)
            .map(|i| ScoreKey {
                score: (i % 997) as i64,
                id: i,
            })
            .max()
            .unwrap();
        assert_eq!(best, expect);
    }

    #[test]
    fn monotone_nondecreasing() {
        let cell = MaxCell::new();
        let mut last = cell.load();
        for (score, id) in [(5, 9), (3, 2), (5, 3), (5, 8), (1, 0)] {
            cell.write_max(ScoreKey { score, id });
            let now = cell.load();
            assert!(now >= last);
            last = now;
        }
        assert_eq!(last, ScoreKey { score: 5, id: 3 });
    }
}
