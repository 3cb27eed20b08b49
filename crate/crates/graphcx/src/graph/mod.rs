//! Oriented graphs with external and internal vertices.
//!
//! Vertex ids follow one layout everywhere: externals occupy `0..N`,
//! internals occupy `N..N+k`. For odd ambient dimension the internal order
//! is the id order; for even ambient dimension the edge list order carries
//! the orientation.

mod canon;
mod chain;
mod encode;

pub use canon::{canonicalize, canonicalize_unsigned, Canon};
pub use chain::ChainVector;
pub use encode::{decode, encode};

use num_rational::BigRational;
use thiserror::Error;

pub type Coeff = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("format error at byte {pos}: {msg}")]
    Format { pos: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
}

/// Parity of the ambient dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// How external vertices behave under relabeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ExternalMode {
    /// Externals carry fixed labels `1..N` (operadic families).
    Labeled,
    /// Externals are interchangeable without sign (hairs for even `m`).
    Symmetric,
    /// Externals are interchangeable with the sign of the permutation (hairs for odd `m`).
    Antisymmetric,
}

impl ExternalMode {
    pub fn is_labeled(self) -> bool {
        matches!(self, ExternalMode::Labeled)
    }
}

/// The sign conventions under which graphs are identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Symmetry {
    pub parity: Parity,
    pub externals: ExternalMode,
}

impl Symmetry {
    pub fn labeled(parity: Parity) -> Self {
        Symmetry { parity, externals: ExternalMode::Labeled }
    }

    /// Hairy convention: hairs permute with sign `(-1)^m`.
    pub fn hairy(parity: Parity, m: i64) -> Self {
        let externals = if m.rem_euclid(2) == 0 {
            ExternalMode::Symmetric
        } else {
            ExternalMode::Antisymmetric
        };
        Symmetry { parity, externals }
    }
}

/// A vertex reference in the user-facing, 1-based numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRef {
    External(usize),
    Internal(usize),
}

pub(crate) type Vid = u8;
const MAX_VERTICES: usize = 250;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    num_external: usize,
    num_internal: usize,
    edges: Vec<(Vid, Vid)>,
}

impl Graph {
    pub fn new(num_external: usize, num_internal: usize, edges: &[(VertexRef, VertexRef)]) -> Result<Self, GraphError> {
        if num_external + num_internal > MAX_VERTICES {
            return Err(GraphError::Structural(format!(
                "too many vertices ({})",
                num_external + num_internal
            )));
        }
        let resolve = |v: VertexRef| -> Result<Vid, GraphError> {
            match v {
                VertexRef::External(l) if (1..=num_external).contains(&l) => Ok((l - 1) as Vid),
                VertexRef::Internal(i) if (1..=num_internal).contains(&i) => Ok((num_external + i - 1) as Vid),
                other => Err(GraphError::Structural(format!("dangling vertex reference {other:?}"))),
            }
        };
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            out.push((resolve(a)?, resolve(b)?));
        }
        Ok(Graph { num_external, num_internal, edges: out })
    }

    /// Builds a graph from raw ids in the layout `0..N` external, `N..N+k` internal.
    pub fn from_ids(num_external: usize, num_internal: usize, edges: Vec<(u8, u8)>) -> Result<Self, GraphError> {
        let total = num_external + num_internal;
        if total > MAX_VERTICES {
            return Err(GraphError::Structural(format!("too many vertices ({total})")));
        }
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a as usize >= total || b as usize >= total) {
            return Err(GraphError::Structural(format!("edge ({a},{b}) references a missing vertex")));
        }
        Ok(Graph { num_external, num_internal, edges })
    }

    pub(crate) fn raw(num_external: usize, num_internal: usize, edges: Vec<(Vid, Vid)>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(a, b)| (a as usize) < num_external + num_internal && (b as usize) < num_external + num_internal));
        Graph { num_external, num_internal, edges }
    }

    pub fn num_external(&self) -> usize {
        self.num_external
    }

    pub fn num_internal(&self) -> usize {
        self.num_internal
    }

    pub fn num_vertices(&self) -> usize {
        self.num_external + self.num_internal
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u8, u8)] {
        &self.edges
    }

    pub fn is_external(&self, v: u8) -> bool {
        (v as usize) < self.num_external
    }

    pub fn vertex_ref(&self, v: u8) -> VertexRef {
        if self.is_external(v) {
            VertexRef::External(v as usize + 1)
        } else {
            VertexRef::Internal(v as usize - self.num_external + 1)
        }
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.num_vertices()];
        for &(a, b) in &self.edges {
            val[a as usize] += 1;
            val[b as usize] += 1;
        }
        val
    }

    pub fn valence(&self, v: u8) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    /// Connected components, as a component index per vertex, and their count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut comp = vec![0; n];
        let mut count = 0;
        for v in 0..n {
            let r = find(&mut parent, v);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            comp[v] = label[r];
        }
        (comp, count)
    }

    pub fn num_components(&self) -> usize {
        self.components().1
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() <= 1 || self.num_components() == 1
    }

    /// First Betti number of the underlying graph.
    pub fn loop_order(&self) -> i64 {
        self.edges.len() as i64 - self.num_vertices() as i64 + self.num_components() as i64
    }

    /// True if some component consists of internal vertices only.
    pub fn has_internal_component(&self) -> bool {
        let (comp, count) = self.components();
        let mut touches_external = vec![false; count];
        for v in 0..self.num_external {
            touches_external[comp[v]] = true;
        }
        (self.num_external..self.num_vertices()).any(|v| !touches_external[comp[v]])
    }

    /// Disjoint union; externals of `other` are numbered after those of `self`,
    /// edges (and internal vertices) of `other` come after those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let (n1, k1) = (self.num_external, self.num_internal);
        let n2 = other.num_external;
        let map_self = |v: u8| -> u8 { if (v as usize) < n1 { v } else { v + n2 as u8 } };
        let map_other = |v: u8| -> u8 {
            if (v as usize) < n2 {
                v + n1 as u8
            } else {
                v + (n1 + k1) as u8
            }
        };
        let mut edges: Vec<(u8, u8)> = self.edges.iter().map(|&(a, b)| (map_self(a), map_self(b))).collect();
        edges.extend(other.edges.iter().map(|&(a, b)| (map_other(a), map_other(b))));
        Graph::raw(n1 + n2, k1 + other.num_internal, edges)
    }

    /// Transposes two entries of the edge list.
    pub fn swap_edges(&mut self, i: usize, j: usize) {
        self.edges.swap(i, j);
    }

    /// Reverses the direction of one edge.
    pub fn flip_edge(&mut self, i: usize) {
        let (a, b) = self.edges[i];
        self.edges[i] = (b, a);
    }

    /// Transposes two internal vertices in the internal order (1-based indices).
    pub fn swap_internal(&mut self, a: usize, b: usize) {
        let n = self.num_external;
        let (va, vb) = ((n + a - 1) as u8, (n + b - 1) as u8);
        let sw = |v: u8| if v == va { vb } else if v == vb { va } else { v };
        for e in &mut self.edges {
            *e = (sw(e.0), sw(e.1));
        }
    }

    /// Relabels vertices by `perm` (old id -> new id), keeping the edge list order.
    pub fn relabel(&self, perm: &[u8]) -> Graph {
        let edges = self.edges.iter().map(|&(a, b)| (perm[a as usize], perm[b as usize])).collect();
        Graph::raw(self.num_external, self.num_internal, edges)
    }

}

/// The canonical representative of an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalGraph {
    graph: Graph,
}

impl PartialOrd for Graph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Graph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num_external, self.num_internal, &self.edges).cmp(&(other.num_external, other.num_internal, &other.edges))
    }
}

impl CanonicalGraph {
    pub(crate) fn from_canonical_graph(graph: Graph) -> Self {
        CanonicalGraph { graph }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn encode(&self) -> String {
        encode(&self.graph)
    }
}

impl std::fmt::Display for CanonicalGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Sign of a permutation given as an image vector.
pub(crate) fn perm_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
