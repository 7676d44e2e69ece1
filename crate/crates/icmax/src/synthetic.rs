//! Seeded random graph generators for verification suites and benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

use crate::graph::Graph;
use crate::sampling;

/// Erdős–Rényi style G(n, m): `m` distinct undirected non-loop edges chosen
/// uniformly. Deterministic for a given seed.
pub fn erdos_renyi(n: u32, m: usize, seed: u64) -> Graph {
    let max_m = n as usize * (n as usize - 1) / 2;
    let m = m.min(max_m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && keys.insert(sampling::edge_key(u, v)) {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("generated edges are in range")
}

/// Preferential attachment (Barabási–Albert style): each new vertex attaches
/// to `per_vertex` existing vertices chosen proportionally to degree, which
/// produces a scale-free degree distribution. Deterministic for a given seed.
pub fn preferential_attachment(n: u32, per_vertex: u32, seed: u64) -> Graph {
    assert!(n >= 2, "need at least two vertices");
    let per_vertex = per_vertex.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Repeated-endpoint list: picking a uniform element is degree-biased.
    let mut endpoints: Vec<u32> = vec![0, 1, 0, 1];
    let mut edges: Vec<(u32, u32)> = vec![(0, 1)];
    for v in 2..n {
        let k = per_vertex.min(v);
        // Insertion-ordered so the edge stream is deterministic.
        let mut targets: Vec<u32> = Vec::with_capacity(k as usize);
        while (targets.len() as u32) < k {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t));
            endpoints.push(v);
            endpoints.push(t);
        }
    }
    Graph::from_edges(n, &edges).expect("generated edges are in range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erdos_renyi_deterministic_and_sized() {
        let a = erdos_renyi(100, 250, 3);
        let b = erdos_renyi(100, 250, 3);
        assert_eq!(a, b);
        assert_eq!(a.m(), 250);
    }

    #[test]
    fn erdos_renyi_caps_at_complete() {
        let g = erdos_renyi(5, 1000, 0);
        assert_eq!(g.m(), 10);
    }

    #[test]
    fn preferential_attachment_scale_free_shape() {
        let g = preferential_attachment(2000, 3, 9);
        assert_eq!(g.n(), 2000);
        // Hubs exist: max degree far above the attachment constant.
        let max_deg = (0..2000).map(|v| g.degree(v)).max().unwrap();
        assert!(max_deg > 30, "max degree {max_deg} too small for scale-free");
        let h = preferential_attachment(2000, 3, 9);
        assert_eq!(g, h);
    }
}
