//! Shared test oracles: explicitly materialized sampled graphs with plain
//! BFS connectivity, independent of the union-find/sketch implementation
//! under test.

use icmax::graph::{Graph, ProbabilityModel};
use icmax::sampling;

/// Component id and size per vertex of one materialized sampled graph.
pub struct MaterializedSketch {
    pub comp: Vec<u32>,
    pub sizes: Vec<u32>,
}

/// Materializes the live edge set of sampled graph `r` and labels its
/// connected components by BFS.
pub fn materialize(g: &Graph, model: &ProbabilityModel, r: u32) -> MaterializedSketch {
    let n = g.n();
    let mut comp = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    for start in 0..n as u32 {
        if comp[start as usize] != u32::MAX {
            continue;
        }
        let id = sizes.len() as u32;
        comp[start as usize] = id;
        let mut queue = std::collections::VecDeque::from([start]);
        let mut count = 0u32;
        while let Some(w) = queue.pop_front() {
            count += 1;
            for &x in g.neighbors(w) {
                if comp[x as usize] == u32::MAX && sampling::sample(g, model, w, x, r) {
                    comp[x as usize] = id;
                    queue.push_back(x);
                }
            }
        }
        sizes.push(count);
    }
    MaterializedSketch { comp, sizes }
}

/// Brute-force marginal gain of `v`: the average component size over all
/// materialized sampled graphs, zeroing components already holding a seed.
pub fn oracle_marginal_sum(sketches: &[MaterializedSketch], seeds: &[u32], v: u32) -> u64 {
    let mut total = 0u64;
    for sk in sketches {
        let cc = sk.comp[v as usize];
        if !seeds.iter().any(|&s| sk.comp[s as usize] == cc) {
            total += sk.sizes[cc as usize] as u64;
        }
    }
    total
}
