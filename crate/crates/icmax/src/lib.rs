//! Parallel influence maximization on undirected graphs under the
//! independent cascade model.
//!
//! The engine estimates influence with `R` implicitly sampled graphs, each
//! summarized by a compressed connectivity sketch whose size is controlled by
//! a center fraction `alpha` (space `O((1 + alpha R) n)`, evaluation cost
//! `O(R min(1/alpha, T))` — see [`sketch`]). Seeds are chosen greedily by one
//! of four interchangeable selectors ([`select`]): exhaustive scanning,
//! sequential lazy greedy, prefix-doubling batches over an ordered score
//! tree, or pruned parallel search over a winning tree ([`pqueue`]). All four
//! return identical seed lists on the same sketches. A Monte-Carlo simulator
//! and an exact small-graph oracle ([`simulate`]) validate the estimates
//! independently.

pub mod cli;
pub mod graph;
pub mod pqueue;
pub mod sampling;
pub mod select;
pub mod simulate;
pub mod sketch;
pub mod synthetic;
