//! Vertex-splitting differentials.

use super::{ComplexError, ComplexSpec, Family};
use crate::graph::{ChainVector, Coeff, Graph};
use num_traits::One;

/// What a splitting is allowed to produce.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SplitRules {
    pub min_valence: usize,
    pub split_externals: bool,
    pub allow_loops: bool,
}

impl SplitRules {
    pub fn for_spec(spec: &ComplexSpec, allow_tadpoles: bool) -> Option<SplitRules> {
        match spec.family {
            Family::Gra => None,
            f => Some(SplitRules {
                min_valence: f.min_valence(),
                split_externals: !f.is_gc(),
                allow_loops: allow_tadpoles,
            }),
        }
    }
}

/// Places a new internal vertex first in the internal order, shifting the others.
fn shift_for_new_internal(g: &Graph) -> Vec<u8> {
    let n = g.num_external();
    (0..g.num_vertices()).map(|v| if v < n { v as u8 } else { (v + 1) as u8 }).collect()
}

/// All splittings of vertex `v` (old id), each unordered split once.
fn split_vertex(g: &Graph, v: u8, rules: SplitRules, mut emit: impl FnMut(Graph)) {
    let n = g.num_external();
    let external = (v as usize) < n;
    let halves: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(i, &(a, b))| {
            let mut h = Vec::new();
            if a == v {
                h.push((i, 0));
            }
            if b == v {
                h.push((i, 1));
            }
            h
        })
        .collect();
    let d = halves.len();
    let perm = shift_for_new_internal(g);
    let new_id = n as u8;
    let old = perm[v as usize];
    let shifted: Vec<(u8, u8)> = g.edges().iter().map(|&(a, b)| (perm[a as usize], perm[b as usize])).collect();
    for mask in 0u64..(1u64 << d) {
        // for internal vertices the first half-edge stays, covering each unordered split once
        if !external && mask & 1 == 1 {
            continue;
        }
        let moved = mask.count_ones() as usize;
        let new_val = moved + 1;
        let old_val = d - moved + 1;
        if new_val < rules.min_valence || (!external && old_val < rules.min_valence) {
            continue;
        }
        let mut edges = Vec::with_capacity(g.num_edges() + 1);
        edges.push((old, new_id));
        edges.extend_from_slice(&shifted);
        for (bit, &(e, end)) in halves.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                let slot = &mut edges[e + 1];
                if end == 0 {
                    slot.0 = new_id;
                } else {
                    slot.1 = new_id;
                }
            }
        }
        if !rules.allow_loops && edges.iter().any(|&(a, b)| a == b) {
            continue;
        }
        emit(Graph::raw(n, g.num_internal() + 1, edges));
    }
}

pub(crate) fn differential_graph(g: &Graph, rules: SplitRules, c: &Coeff, out: &mut ChainVector) {
    let n = g.num_external();
    let start = if rules.split_externals { 0 } else { n };
    for v in start..g.num_vertices() {
        split_vertex(g, v as u8, rules, |h| out.add_graph_unchecked(&h, c));
    }
}

/// Applies the differential of `spec` to a chain.
pub fn differential(x: &ChainVector, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    differential_with(x, spec, false)
}

pub fn differential_with(x: &ChainVector, spec: &ComplexSpec, allow_tadpoles: bool) -> Result<ChainVector, ComplexError> {
    if x.symmetry() != spec.symmetry() {
        return Err(ComplexError::Spec("chain symmetry does not match the complex".into()));
    }
    let mut out = ChainVector::new(spec.symmetry());
    let Some(rules) = SplitRules::for_spec(spec, allow_tadpoles) else {
        return Ok(out);
    };
    for (g, c) in x.iter() {
        differential_graph(g.graph(), rules, c, &mut out);
    }
    Ok(out)
}

/// Differential of a single graph.
pub fn differential_of(g: &Graph, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    spec.check_member(g, false)?;
    let mut out = ChainVector::new(spec.symmetry());
    if let Some(rules) = SplitRules::for_spec(spec, false) {
        differential_graph(g, rules, &Coeff::one(), &mut out);
    }
    Ok(out)
}
