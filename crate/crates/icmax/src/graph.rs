//! Immutable undirected graphs in compressed-sparse-row form, plus the edge
//! probability models of the independent cascade setup.
//!
//! Graphs are simple: ingestion drops self-loops, dedupes parallel edges, and
//! stores every undirected edge in both endpoints' (sorted) adjacency lists.
//! Vertex ids are 32-bit and 0-based, a requirement of the packed 64-bit edge
//! key in [`crate::sampling`].

use std::io::{self, BufRead, Read, Write};

use crate::sampling;

/// Errors from graph ingestion and serialization.
#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex id {id} does not fit in 32 bits")]
    Capacity { id: u64 },
    #[error("endpoint {v} out of range for vertex count {n}")]
    OutOfRange { v: u64, n: u64 },
    #[error("malformed CSR data: {0}")]
    InvalidCsr(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Immutable undirected graph. `offsets` has length `n + 1`; the neighbors of
/// `v` are `neighbors[offsets[v]..offsets[v+1]]`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph on `n` vertices from undirected edge pairs. Self-loops
    /// are dropped and duplicates (in either orientation) deduped.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let n = n as usize;
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::OutOfRange {
                    v: u.max(v) as u64,
                    n: n as u64,
                });
            }
            if u == v {
                continue;
            }
            pairs.push(if u < v { (u, v) } else { (v, u) });
        }
        pairs.sort_unstable();
        pairs.dedup();

        let m = pairs.len();
        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; 2 * m];
        for &(u, v) in &pairs {
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok(Graph {
            n,
            m,
            offsets,
            neighbors,
        })
    }

    /// Parses whitespace-separated `u v` pairs, one edge per line. Lines
    /// starting with `#` or `%` are comments. Directed inputs are
    /// symmetrized, self-loops dropped, duplicates deduped, and vertex ids
    /// compacted to `0..n-1` preserving numeric order.
    pub fn from_edge_list_text<R: BufRead>(reader: R) -> Result<Graph, GraphError> {
        let mut raw: Vec<(u64, u64)> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
                continue;
            }
            let mut it = trimmed.split_whitespace();
            let u = parse_vertex(it.next(), line_no)?;
            let v = parse_vertex(it.next(), line_no)?;
            if it.next().is_some() {
                return Err(GraphError::Parse {
                    line: line_no,
                    msg: "expected exactly two vertex ids".into(),
                });
            }
            raw.push((u, v));
        }

        let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        for &id in &ids {
            if id > u32::MAX as u64 {
                return Err(GraphError::Capacity { id });
            }
        }
        let remap = |x: u64| ids.binary_search(&x).unwrap() as u32;
        let edges: Vec<(u32, u32)> = raw.iter().map(|&(u, v)| (remap(u), remap(v))).collect();
        Graph::from_edges(ids.len() as u32, &edges)
    }

    /// Reads the binary CSR format: little-endian u64 header `(n, m)`,
    /// offsets as `u64 * (n+1)`, neighbors as `u32 * 2m`.
    pub fn read_csr<R: Read>(mut reader: R) -> Result<Graph, GraphError> {
        let n = read_u64(&mut reader)? as usize;
        let m = read_u64(&mut reader)? as usize;
        let mut offsets = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            offsets.push(read_u64(&mut reader)? as usize);
        }
        let mut neighbors = vec![0u32; 2 * m];
        let mut buf = [0u8; 4];
        for nb in neighbors.iter_mut() {
            reader.read_exact(&mut buf)?;
            *nb = u32::from_le_bytes(buf);
        }
        if offsets.first() != Some(&0) || offsets.last() != Some(&(2 * m)) {
            return Err(GraphError::InvalidCsr(
                "offsets must start at 0 and end at 2m".into(),
            ));
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(GraphError::InvalidCsr("offsets must be nondecreasing".into()));
        }
        if neighbors.iter().any(|&v| v as usize >= n) {
            return Err(GraphError::InvalidCsr("neighbor id out of range".into()));
        }
        Ok(Graph {
            n,
            m,
            offsets,
            neighbors,
        })
    }

    /// Writes the binary CSR format (see [`Graph::read_csr`]). Round-trips
    /// bit-identically.
    pub fn write_csr<W: Write>(&self, mut writer: W) -> io::Result<()> {
        writer.write_all(&(self.n as u64).to_le_bytes())?;
        writer.write_all(&(self.m as u64).to_le_bytes())?;
        for &o in &self.offsets {
            writer.write_all(&(o as u64).to_le_bytes())?;
        }
        for &v in &self.neighbors {
            writer.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Vertex count.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Undirected edge count.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    #[inline]
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Iterates each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n as u32).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }
}

fn parse_vertex(tok: Option<&str>, line: usize) -> Result<u64, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse {
        line,
        msg: "missing vertex id".into(),
    })?;
    tok.parse::<u64>().map_err(|e| GraphError::Parse {
        line,
        msg: format!("bad vertex id {tok:?}: {e}"),
    })
}

fn read_u64<R: Read>(reader: &mut R) -> io::Result<u64> {
    let mut buf = [0u8; 8];
    reader.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

/// Edge activation probability model. Every variant is deterministic and
/// symmetric in `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum ProbabilityModel {
    /// Every edge activates with the same probability.
    Constant(f64),
    /// Per-edge probability drawn deterministically from the canonical edge
    /// key: `lo + (hi - lo) * mix64(edge_key(u, v)) / 2^64`. Nothing is
    /// stored; graphs stay immutable and runs reproducible.
    UniformRange { lo: f64, hi: f64 },
    /// `p_uv = 2 / (deg(u) + deg(v))`, the undirected analogue of the
    /// weighted cascade assignment.
    DegreeWeighted,
}

impl ProbabilityModel {
    /// Activation probability of edge `(u, v)`. Requires `(u, v)` to be an
    /// edge of `g` (checked in debug builds).
    #[inline]
    pub fn edge_probability(&self, g: &Graph, u: u32, v: u32) -> f64 {
        debug_assert!(g.has_edge(u, v), "({u},{v}) is not an edge");
        match *self {
            ProbabilityModel::Constant(p) => p,
            ProbabilityModel::UniformRange { lo, hi } => {
                let x = sampling::mix64(sampling::edge_key(u, v));
                lo + (hi - lo) * (x as f64 / 18_446_744_073_709_551_616.0)
            }
            ProbabilityModel::DegreeWeighted => 2.0 / (g.degree(u) + g.degree(v)) as f64,
        }
    }
}
