//! Sparse rational linear combinations of canonical graphs.

use super::{canonicalize, Canon, CanonicalGraph, Coeff, Graph, GraphError, Symmetry};
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

#[derive(Debug, Clone, PartialEq)]
pub struct ChainVector {
    sym: Symmetry,
    terms: FxHashMap<CanonicalGraph, Coeff>,
}

impl ChainVector {
    pub fn new(sym: Symmetry) -> Self {
        ChainVector { sym, terms: FxHashMap::default() }
    }

    pub fn from_graph(g: &Graph, sym: Symmetry) -> Result<Self, GraphError> {
        let mut v = ChainVector::new(sym);
        v.add_graph(g, &Coeff::one())?;
        Ok(v)
    }

    pub fn symmetry(&self) -> Symmetry {
        self.sym
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &CanonicalGraph) -> Coeff {
        self.terms.get(g).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Adds `c` times an arbitrary graph, canonicalizing with sign.
    pub fn add_graph(&mut self, g: &Graph, c: &Coeff) -> Result<(), GraphError> {
        if let Canon::Graph(cg, s) = canonicalize(g, self.sym)? {
            if s > 0 {
                self.add_canonical(cg, c.clone());
            } else {
                self.add_canonical(cg, -c.clone());
            }
        }
        Ok(())
    }

    pub(crate) fn add_graph_unchecked(&mut self, g: &Graph, c: &Coeff) {
        self.add_graph(g, c).expect("internally built graph is well formed");
    }

    pub fn add_canonical(&mut self, g: CanonicalGraph, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ChainVector, c: &Coeff) {
        for (g, x) in &other.terms {
            self.add_canonical(g.clone(), x * c);
        }
    }

    pub fn add_assign(&mut self, other: &ChainVector) {
        self.add_scaled(other, &Coeff::one());
    }

    pub fn sub_assign(&mut self, other: &ChainVector) {
        self.add_scaled(other, &-Coeff::one());
    }

    pub fn scaled(&self, c: &Coeff) -> ChainVector {
        let mut out = ChainVector::new(self.sym);
        out.add_scaled(self, c);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalGraph, &Coeff)> {
        self.terms.iter()
    }

    /// Terms ordered by encoding, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(String, &CanonicalGraph, &Coeff)> {
        let mut v: Vec<_> = self.terms.iter().map(|(g, c)| (g.encode(), g, c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&CanonicalGraph) -> bool) -> ChainVector {
        ChainVector {
            sym: self.sym,
            terms: self.terms.iter().filter(|(g, _)| keep(g)).map(|(g, c)| (g.clone(), c.clone())).collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (enc, _, c) in self.sorted_terms() {
            s.push_str(&format!("{c}\t{enc}\n"));
        }
        s
    }
}

impl std::fmt::Display for ChainVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.sorted_terms().into_iter().map(|(e, _, c)| format!("({c}) [{e}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}
