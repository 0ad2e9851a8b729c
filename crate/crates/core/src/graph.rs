use std::collections::BTreeSet;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest qubit count a [`GraphSpec`] may have; neighborhoods are stored as
/// `u64` bit masks.
pub const MAX_QUBITS: usize = 64;

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct GraphSpec {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawGraph> for GraphSpec {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        GraphSpec::new(raw.n, raw.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<GraphSpec> for RawGraph {
    fn from(g: GraphSpec) -> Self {
        RawGraph {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl GraphSpec {
    /// Builds a graph, rejecting self-loops, duplicate edges (in either
    /// orientation) and out-of-range vertices.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        if n > MAX_QUBITS {
            return Err(Error::InvalidGraph(format!(
                "{n} vertices exceeds the maximum of {MAX_QUBITS}"
            )));
        }
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        let mut neighbors = vec![0u64; n];
        for &(u, v) in &edges {
            neighbors[u] |= 1 << v;
            neighbors[v] |= 1 << u;
        }
        Ok(Self {
            n,
            edges,
            neighbors,
        })
    }

    /// Path `0 - 1 - … - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|v| (v - 1, v)))
    }

    /// Cycle on `n >= 3` vertices.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!(
                "ring needs at least 3 vertices, got {n}"
            )));
        }
        Self::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Star with vertex 0 at the center.
    pub fn star(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|v| (0, v)))
    }

    /// Parses a preset name: `path-N`, `ring-N` or `star-N`.
    pub fn preset(name: &str) -> Result<Self> {
        let (kind, size) = name
            .split_once('-')
            .ok_or_else(|| Error::InvalidGraph(format!("unknown graph preset '{name}'")))?;
        let n: usize = size
            .parse()
            .map_err(|_| Error::InvalidGraph(format!("bad vertex count in preset '{name}'")))?;
        match kind {
            "path" => Self::path(n),
            "ring" => Self::ring(n),
            "star" => Self::star(n),
            _ => Err(Error::InvalidGraph(format!(
                "unknown graph preset '{name}'"
            ))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighborhood of `v` as a bit mask.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.neighbors[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.neighbors[v];
        (0..self.n).filter(move |&u| mask >> u & 1 == 1)
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors[u] >> v & 1 == 1
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Self::from_json(s)
        } else {
            Self::preset(s)
        }
    }
}
