//! Operadic insertion of graphs into external vertices.

use super::ComplexError;
use crate::graph::{ChainVector, Coeff, Graph};

/// Inserts `y` into external vertex `slot` (0-based) of `x`, calling `emit` once per
/// redistribution of the half-edges formerly at that vertex.
///
/// Externals of the result: those of `x` before the slot, then those of `y`, then the rest of `x`.
/// Edges and internal vertices of `x` precede those of `y`.
pub(crate) fn insert_graph(x: &Graph, slot: usize, y: &Graph, mut emit: impl FnMut(Graph)) {
    let (nx, kx) = (x.num_external(), x.num_internal());
    let (ny, ky) = (y.num_external(), y.num_internal());
    let n = nx + ny - 1;
    let map_x = |v: u8| -> u8 {
        let v = v as usize;
        (if v < slot {
            v
        } else if v < nx {
            v + ny - 1
        } else {
            n + (v - nx)
        }) as u8
    };
    let map_y = |v: u8| -> u8 {
        let v = v as usize;
        (if v < ny { slot + v } else { n + kx + (v - ny) }) as u8
    };
    let s = slot as u8;
    let mut base: Vec<(u8, u8)> = Vec::with_capacity(x.num_edges() + y.num_edges());
    let mut halves = Vec::new();
    for (e, &(a, b)) in x.edges().iter().enumerate() {
        if a == s {
            halves.push((e, 0));
        }
        if b == s {
            halves.push((e, 1));
        }
        base.push((if a == s { 0 } else { map_x(a) }, if b == s { 0 } else { map_x(b) }));
    }
    base.extend(y.edges().iter().map(|&(a, b)| (map_y(a), map_y(b))));
    let targets: Vec<u8> = (0..(ny + ky) as u8).map(map_y).collect();
    let total = n + kx + ky;
    let mut choice = vec![0usize; halves.len()];
    if targets.is_empty() {
        if halves.is_empty() {
            emit(Graph::raw(n, kx + ky, base));
        }
        return;
    }
    loop {
        let mut edges = base.clone();
        for (h, &(e, end)) in halves.iter().enumerate() {
            let t = targets[choice[h]];
            if end == 0 {
                edges[e].0 = t;
            } else {
                edges[e].1 = t;
            }
        }
        debug_assert!(edges.iter().all(|&(a, b)| (a as usize) < total && (b as usize) < total));
        emit(Graph::raw(n, kx + ky, edges));
        let mut i = 0;
        loop {
            if i == choice.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < targets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Operadic composition `x ∘_slot y` (slot is 1-based), bilinear in both arguments.
pub fn compose(x: &ChainVector, slot: usize, y: &ChainVector) -> Result<ChainVector, ComplexError> {
    let sym = x.symmetry();
    if sym != y.symmetry() {
        return Err(ComplexError::Domain("composition of chains with different symmetry".into()));
    }
    if !sym.externals.is_labeled() {
        return Err(ComplexError::Domain("composition needs labeled external vertices".into()));
    }
    let mut out = ChainVector::new(sym);
    for (gx, cx) in x.iter() {
        let n = gx.graph().num_external();
        if slot == 0 || slot > n {
            return Err(ComplexError::Domain(format!("slot {slot} outside arity {n}")));
        }
        for (gy, cy) in y.iter() {
            let c: Coeff = cx * cy;
            insert_graph(gx.graph(), slot - 1, gy.graph(), |g| out.add_graph_unchecked(&g, &c));
        }
    }
    Ok(out)
}

/// Inserts the unit into external vertex `slot` (1-based): the vertex is forgotten if it
/// has valence zero, and the graph maps to zero otherwise.
pub fn unital_insert(x: &ChainVector, slot: usize) -> Result<ChainVector, ComplexError> {
    let sym = x.symmetry();
    if !sym.externals.is_labeled() {
        return Err(ComplexError::Domain("unital insertion needs labeled external vertices".into()));
    }
    let mut out = ChainVector::new(sym);
    for (g, c) in x.iter() {
        let g = g.graph();
        if slot == 0 || slot > g.num_external() {
            return Err(ComplexError::Domain(format!("slot {slot} outside arity {}", g.num_external())));
        }
        let s = (slot - 1) as u8;
        if g.valence(s) != 0 {
            continue;
        }
        let edges = g.edges().iter().map(|&(a, b)| (a - u8::from(a > s), b - u8::from(b > s))).collect();
        out.add_graph_unchecked(&Graph::raw(g.num_external() - 1, g.num_internal(), edges), c);
    }
    Ok(out)
}
