//! Size-annotated treap over [`ScoreKey`]s, in decreasing order.
//!
//! Supports the three operations prefix-doubling selection needs: remove the
//! `k` best keys (split by rank), insert a batch back, and peek the best.
//! Node priorities are a hash of the vertex id, so the tree shape is a pure
//! function of its content and runs are reproducible at any thread count.

use std::collections::HashSet;

use super::{PqueueError, ScoreKey};
use crate::sampling::mix64;

type Link = Option<Box<Node>>;

#[derive(Debug)]
struct Node {
    key: ScoreKey,
    prio: u64,
    size: usize,
    left: Link,
    right: Link,
}

impl Node {
    fn leaf(key: ScoreKey) -> Box<Node> {
        Box::new(Node {
            key,
            prio: mix64(key.id as u64 ^ 0x5EED_5C02_EE75_0000),
            size: 1,
            left: None,
            right: None,
        })
    }

    fn update(&mut self) {
        self.size = 1 + size(&self.left) + size(&self.right);
    }
}

#[inline]
fn size(link: &Link) -> usize {
    link.as_ref().map_or(0, |n| n.size)
}

/// Keys ranked before `pivot` (greater under the total order) go left.
fn split_by_key(link: Link, pivot: ScoreKey) -> (Link, Link) {
    match link {
        None => (None, None),
        Some(mut node) => {
            if node.key > pivot {
                let (a, b) = split_by_key(node.right.take(), pivot);
                node.right = a;
                node.update();
                (Some(node), b)
            } else {
                let (a, b) = split_by_key(node.left.take(), pivot);
                node.left = b;
                node.update();
                (a, Some(node))
            }
        }
    }
}

/// First `k` in-order nodes to the left part, the rest to the right.
fn split_by_rank(link: Link, k: usize) -> (Link, Link) {
    match link {
        None => (None, None),
        Some(mut node) => {
            let left_size = size(&node.left);
            if k <= left_size {
                let (a, b) = split_by_rank(node.left.take(), k);
                node.left = b;
                node.update();
                (a, Some(node))
            } else {
                let (a, b) = split_by_rank(node.right.take(), k - left_size - 1);
                node.right = a;
                node.update();
                (Some(node), b)
            }
        }
    }
}

/// Joins two treaps where every key of `a` ranks before every key of `b`.
fn merge(a: Link, b: Link) -> Link {
    match (a, b) {
        (None, b) => b,
        (a, None) => a,
        (Some(mut x), Some(mut y)) => {
            if x.prio >= y.prio {
                x.right = merge(x.right.take(), Some(y));
                x.update();
                Some(x)
            } else {
                y.left = merge(Some(x), y.left.take());
                y.update();
                Some(y)
            }
        }
    }
}

fn collect_in_order(link: &Link, out: &mut Vec<ScoreKey>) {
    if let Some(node) = link {
        collect_in_order(&node.left, out);
        out.push(node.key);
        collect_in_order(&node.right, out);
    }
}

/// Balanced search tree over candidate scores; in-order traversal yields keys
/// in decreasing [`ScoreKey`] order.
#[derive(Debug, Default)]
pub struct OrderedScoreTree {
    root: Link,
    ids: HashSet<u32>,
}

impl OrderedScoreTree {
    /// Builds a tree from keys with distinct ids.
    pub fn build(keys: &[ScoreKey]) -> Result<OrderedScoreTree, PqueueError> {
        let mut tree = OrderedScoreTree::default();
        tree.batch_insert(keys)?;
        Ok(tree)
    }

    #[inline]
    pub fn len(&self) -> usize {
        size(&self.root)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// Inserts every key; fails without modification on an id already
    /// present (or duplicated within the batch).
    pub fn batch_insert(&mut self, keys: &[ScoreKey]) -> Result<(), PqueueError> {
        let mut batch_ids = HashSet::with_capacity(keys.len());
        for key in keys {
            if self.ids.contains(&key.id) || !batch_ids.insert(key.id) {
                return Err(PqueueError::DuplicateId(key.id));
            }
        }
        for &key in keys {
            self.ids.insert(key.id);
            let (a, b) = split_by_key(self.root.take(), key);
            self.root = merge(merge(a, Some(Node::leaf(key))), b);
        }
        Ok(())
    }

    /// Removes and returns the `min(k, len)` best keys, best first.
    pub fn split_and_remove(&mut self, k: usize) -> Vec<ScoreKey> {
        let (removed, rest) = split_by_rank(self.root.take(), k);
        self.root = rest;
        let mut out = Vec::with_capacity(k.min(self.ids.len()));
        collect_in_order(&removed, &mut out);
        for key in &out {
            self.ids.remove(&key.id);
        }
        out
    }

    /// The best key without removal.
    pub fn max(&self) -> Option<ScoreKey> {
        let mut cur = self.root.as_ref()?;
        while let Some(left) = cur.left.as_ref() {
            cur = left;
        }
        Some(cur.key)
    }

    /// All keys, best first. For tests and audits.
    pub fn to_sorted_vec(&self) -> Vec<ScoreKey> {
        let mut out = Vec::with_capacity(self.len());
        collect_in_order(&self.root, &mut out);
        out
    }
}
