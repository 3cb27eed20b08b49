//! Pre-Lie product, bracket and cup product on hairy graphs.

use super::compose::insert_graph;
use super::{ComplexError, ComplexSpec};
use crate::graph::{ChainVector, Coeff, Graph};
use num_bigint::BigInt;
use num_traits::One;

fn parity_sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 { 1 } else { -1 }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn check_hairy(spec: &ComplexSpec) -> Result<i64, ComplexError> {
    if !spec.family.is_hairy() {
        return Err(ComplexError::Spec(format!("{} is not a hairy family", spec.family.name())));
    }
    Ok(spec.m_or_zero())
}

/// Moves hair `h` (0-based) to the last position, shifting later hairs down.
fn hair_to_end(g: &Graph, h: usize) -> Graph {
    let n = g.num_external();
    let perm: Vec<u8> = (0..g.num_vertices())
        .map(|v| {
            (if v == h {
                n - 1
            } else if v > h && v < n {
                v - 1
            } else {
                v
            }) as u8
        })
        .collect();
    g.relabel(&perm)
}

/// Adds `c * (x ∘ y)` for single graphs; terms gluing a hair onto a hair are kept.
pub(crate) fn pre_lie_graphs(x: &Graph, y: &Graph, spec: &ComplexSpec, c: &Coeff, out: &mut ChainVector) {
    let m = spec.m_or_zero();
    let nx = x.num_external();
    let my = y.num_external();
    if nx == 0 {
        return;
    }
    let deg_y = spec.degree(y).unwrap_or(0);
    // the shuffle sign (-1)^{m(N-1)} combined with moving y past the N-1 shifted hairs
    let e = m * (nx as i64 - 1) * deg_y + spec.n + 1;
    let pref = Coeff::new(binomial((nx + my - 1) as u64, my as u64), BigInt::from(nx as u64));
    let base = c * pref * Coeff::from_integer(BigInt::from(parity_sign(e)));
    for h in 0..nx {
        let chi = parity_sign(m * (nx - 1 - h) as i64);
        let coeff = &base * Coeff::from_integer(BigInt::from(chi));
        let moved = hair_to_end(x, h);
        insert_graph(&moved, nx - 1, y, |g| out.add_graph_unchecked(&g, &coeff));
    }
}

fn homogeneous_degree(x: &ChainVector, spec: &ComplexSpec) -> Result<Option<i64>, ComplexError> {
    let mut d = None;
    for (g, _) in x.iter() {
        let dg = spec.degree(g.graph())?;
        match d {
            None => d = Some(dg),
            Some(d0) if d0 != dg => {
                return Err(ComplexError::Domain(format!("chain is not homogeneous: degrees {d0} and {dg}")))
            }
            _ => {}
        }
    }
    Ok(d)
}

fn drop_unhairy(v: ChainVector) -> ChainVector {
    v.filtered(|g| {
        let val = g.graph().valences();
        (0..g.graph().num_external()).all(|h| val[h] == 1)
    })
}

/// Pre-Lie product `x ∘ y`, including terms that glue a hair of `x` onto a hair of `y`.
pub fn pre_lie(x: &ChainVector, y: &ChainVector, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    check_hairy(spec)?;
    let mut out = ChainVector::new(spec.symmetry());
    for (gx, cx) in x.iter() {
        for (gy, cy) in y.iter() {
            pre_lie_graphs(gx.graph(), gy.graph(), spec, &(cx * cy), &mut out);
        }
    }
    Ok(out)
}

/// Bracket without discarding graphs whose hairs became bivalent.
pub(crate) fn bracket_raw(x: &ChainVector, y: &ChainVector, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    let mut out = ChainVector::new(spec.symmetry());
    for (gx, cx) in x.iter() {
        let dx = spec.degree(gx.graph())?;
        for (gy, cy) in y.iter() {
            let dy = spec.degree(gy.graph())?;
            let c = cx * cy;
            pre_lie_graphs(gx.graph(), gy.graph(), spec, &c, &mut out);
            let c2 = -c * Coeff::from_integer(BigInt::from(parity_sign(dx * dy)));
            pre_lie_graphs(gy.graph(), gx.graph(), spec, &c2, &mut out);
        }
    }
    Ok(out)
}

/// Graded Lie bracket of homogeneous hairy chains.
pub fn bracket(x: &ChainVector, y: &ChainVector, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    check_hairy(spec)?;
    homogeneous_degree(x, spec)?;
    homogeneous_degree(y, spec)?;
    Ok(drop_unhairy(bracket_raw(x, y, spec)?))
}

/// Bracket extended bilinearly over possibly inhomogeneous chains.
pub(crate) fn bracket_termwise(x: &ChainVector, y: &ChainVector, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    Ok(drop_unhairy(bracket_raw(x, y, spec)?))
}

/// Cup product: disjoint union, `x`'s hairs first.
pub fn cup(x: &ChainVector, y: &ChainVector, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    check_hairy(spec)?;
    let mut out = ChainVector::new(spec.symmetry());
    for (gx, cx) in x.iter() {
        for (gy, cy) in y.iter() {
            out.add_graph_unchecked(&gx.graph().disjoint_union(gy.graph()), &(cx * cy));
        }
    }
    Ok(out)
}

/// Hair count of each term, if all agree.
pub fn hair_count(x: &ChainVector) -> Option<usize> {
    let mut h = None;
    for (g, _) in x.iter() {
        let n = g.graph().num_external();
        if h.is_some_and(|h0| h0 != n) {
            return None;
        }
        h = Some(n);
    }
    h
}
