//! Action of the bivalent graph complex on operadic and hairy graphs.

use super::compose::insert_graph;
use super::mc::{corona, truncate_hairs, MaurerCartan};
use super::{ComplexError, ComplexSpec, Family};
use crate::graph::{ChainVector, Coeff, Graph, Parity};
use num_bigint::BigInt;
use num_traits::One;

/// Makes internal vertex `v` the last external, keeping the order of the other internals.
fn open_vertex(g: &Graph, v: u8) -> Graph {
    let n = g.num_external() as u8;
    let map = |u: u8| -> u8 {
        if u < n || u > v {
            u
        } else if u == v {
            n
        } else {
            u + 1
        }
    };
    let edges = g.edges().iter().map(|&(a, b)| (map(a), map(b))).collect();
    Graph::raw(g.num_external() + 1, g.num_internal() - 1, edges)
}

fn odd_sign(parity: Parity, e: usize) -> i64 {
    if parity == Parity::Odd && e % 2 == 1 { -1 } else { 1 }
}

/// Moves the trailing `guest_edges` edges and `guest_internals` internal vertices in front of the host's.
fn guest_first(g: Graph, host_internals: usize, guest_internals: usize, guest_edges: usize) -> Graph {
    let n = g.num_external();
    let map = |u: u8| -> u8 {
        let u = u as usize;
        (if u < n {
            u
        } else if u < n + host_internals {
            u + guest_internals
        } else {
            u - host_internals
        }) as u8
    };
    let e = g.num_edges();
    let mut edges: Vec<(u8, u8)> = g.edges()[e - guest_edges..].iter().map(|&(a, b)| (map(a), map(b))).collect();
    edges.extend(g.edges()[..e - guest_edges].iter().map(|&(a, b)| (map(a), map(b))));
    Graph::raw(n, g.num_internal(), edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Terms {
    Insertion,
    Full,
    Hairy,
}

fn act_graphs(gamma: &Graph, host: &Graph, parity: Parity, terms: Terms, c: &Coeff, out: &mut ChainVector) {
    let n = host.num_external();
    let (kh, kg, eg) = (host.num_internal(), gamma.num_internal(), gamma.num_edges());
    let scaled = |s: i64| c * Coeff::from_integer(BigInt::from(s));
    // γ replaces an internal vertex, which is first moved to the front
    for v in n..host.num_vertices() {
        let coeff = scaled(odd_sign(parity, v - n));
        insert_graph(&open_vertex(host, v as u8), n, gamma, |g| {
            out.add_graph_unchecked(&guest_first(g, kh - 1, kg, eg), &coeff)
        });
    }
    if terms == Terms::Insertion {
        return;
    }
    // γ with one vertex, taken from the back of its order, made external
    for w in 0..kg {
        let s = odd_sign(parity, kg - 1 - w);
        let pointed = open_vertex(gamma, w as u8);
        let coeff = scaled(-s);
        insert_graph(&pointed, 0, host, |g| out.add_graph_unchecked(&g, &coeff));
        if terms == Terms::Hairy {
            // inserting into a hair never leaves it univalent
            continue;
        }
        let coeff = scaled(s);
        for j in 0..n {
            insert_graph(host, j, &pointed, |g| out.add_graph_unchecked(&guest_first(g, kh, kg - 1, eg), &coeff));
        }
    }
}

fn keep_hairy(v: ChainVector) -> ChainVector {
    v.filtered(|g| {
        let val = g.graph().valences();
        (0..g.graph().num_external()).all(|h| val[h] == 1)
    })
}

fn act(gamma: &ChainVector, x: &ChainVector, spec: &ComplexSpec, terms: Terms) -> Result<ChainVector, ComplexError> {
    if !(spec.family.is_operadic() || spec.family.is_hairy()) || spec.family == Family::Gra {
        return Err(ComplexError::Spec(format!("graph complexes do not act on {}", spec.family.name())));
    }
    let parity = spec.parity();
    if gamma.symmetry().parity != parity || x.symmetry() != spec.symmetry() {
        return Err(ComplexError::Domain("parity of the acting graph and the target differ".into()));
    }
    let mut out = ChainVector::new(spec.symmetry());
    for (gg, cg) in gamma.iter() {
        if gg.graph().num_external() != 0 {
            return Err(ComplexError::Domain(format!("{gg} is not a graph complex element")));
        }
        for (gx, cx) in x.iter() {
            act_graphs(gg.graph(), gx.graph(), parity, terms, &(cg * cx), &mut out);
        }
    }
    Ok(if spec.family.is_hairy() { keep_hairy(out) } else { out })
}

/// `γ·Γ` for `γ` in the bivalent graph complex and `Γ` operadic or hairy.
///
/// On operadic targets this is a derivation with `δ(γ·Γ) = (δγ)·Γ + (-1)^{|γ|} γ·δΓ`.
/// On hairy targets only terms whose hairs stay univalent are kept.
pub fn gc_action(gamma: &ChainVector, x: &ChainVector, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    let terms = if spec.family.is_hairy() { Terms::Hairy } else { Terms::Full };
    act(gamma, x, spec, terms)
}

/// Inserts `γ` into every internal vertex of `x`, reconnecting the edges there in all ways.
pub fn vertex_insertion(gamma: &ChainVector, x: &ChainVector, spec: &ComplexSpec) -> Result<ChainVector, ComplexError> {
    act(gamma, x, spec, Terms::Insertion)
}

/// `sum_k c_k (γ with 2k+1 hairs attached in all ways)`, where `c_k` are the corona
/// coefficients of `mc` and `c_0 = 1`.
pub fn class_image(gamma: &ChainVector, mc: &MaurerCartan) -> Result<ChainVector, ComplexError> {
    let spec = mc.spec();
    let mut host = mc.total();
    host.add_graph(&corona(1), &Coeff::one())?;
    Ok(truncate_hairs(&vertex_insertion(gamma, &host, spec)?, mc.h_max()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{compose, differential, enumerate, Window};
    use crate::graph::decode;

    fn basis(spec: &ComplexSpec, w: &Window) -> Vec<ChainVector> {
        enumerate(spec, w)
            .unwrap()
            .iter()
            .map(|(_, g)| ChainVector::from_graph(g.graph(), spec.symmetry()).unwrap())
            .collect()
    }

    fn degree(x: &ChainVector, spec: &ComplexSpec) -> i64 {
        spec.degree(x.iter().next().unwrap().0.graph()).unwrap()
    }

    fn sign(e: i64) -> Coeff {
        Coeff::from_integer(BigInt::from(if e.rem_euclid(2) == 0 { 1 } else { -1 }))
    }

    fn gammas(n: i64) -> (ComplexSpec, Vec<ChainVector>) {
        let gc = ComplexSpec::graph_complex(Family::GC2, n).unwrap();
        let mut out = Vec::new();
        for j in 1..3 {
            out.extend(basis(&gc, &Window::loops(j).with_max_internal(4)));
        }
        (gc, out)
    }

    fn defect(gamma: &ChainVector, x: &ChainVector, gc: &ComplexSpec, spec: &ComplexSpec) -> ChainVector {
        let mut r = differential(&gc_action(gamma, x, spec).unwrap(), spec).unwrap();
        r.sub_assign(&gc_action(&differential(gamma, gc).unwrap(), x, spec).unwrap());
        let tail = gc_action(gamma, &differential(x, spec).unwrap(), spec).unwrap();
        r.add_scaled(&tail, &-sign(degree(gamma, gc)));
        r
    }

    #[test]
    fn chain_map_on_operadic_graphs() {
        for n in 2..4 {
            let (gc, gs) = gammas(n);
            let spec = ComplexSpec::operadic(Family::Graphs2, n, 2).unwrap();
            let mut xs = basis(&spec, &Window::loops(0).with_max_internal(2));
            xs.extend(basis(&spec, &Window::loops(1).with_max_internal(2)));
            for g in &gs {
                for x in &xs {
                    assert!(defect(g, x, &gc, &spec).is_zero(), "n={n} {} on {}", g.to_text(), x.to_text());
                }
            }
        }
    }

    fn loop_graph(r: usize) -> Graph {
        Graph::from_ids(0, r, (0..r).map(|i| (i as u8, ((i + 1) % r) as u8)).collect()).unwrap()
    }

    #[test]
    fn images_of_closed_graphs_are_twisted_cocycles() {
        use crate::complexes::Twisted;
        for n in 2..4 {
            let gc = ComplexSpec::graph_complex(Family::GC2, n).unwrap();
            let hairy = ComplexSpec::hairy(Family::HGC2, n - 1, n).unwrap();
            let quarter = Coeff::new(BigInt::from(1), BigInt::from(4));
            let mc = MaurerCartan::coronas(&hairy, 5, |k| num_traits::pow(quarter.clone(), k)).unwrap();
            let tw = Twisted::new(mc.clone()).unwrap().with_tadpoles(true);
            let mut gs: Vec<ChainVector> =
                (1..7).map(|r| ChainVector::from_graph(&loop_graph(r), gc.symmetry()).unwrap()).collect();
            gs.extend(basis(&ComplexSpec::graph_complex(Family::GC, n).unwrap(), &Window::loops(3)));
            let mut nonzero = 0;
            for g in gs.iter().filter(|g| !g.is_zero() && differential(g, &gc).unwrap().is_zero()) {
                let img = class_image(g, &mc).unwrap();
                assert!(!img.is_zero());
                assert!(tw.differential(&img).unwrap().is_zero(), "n={n} {}", g.to_text());
                nonzero += 1;
            }
            assert!(nonzero >= 3);
        }
    }

    #[test]
    fn tadpole_acting_on_tripod() {
        let spec = ComplexSpec::hairy(Family::HGC, 1, 2).unwrap();
        let l1 = ChainVector::from_graph(&loop_graph(1), crate::graph::Symmetry::labeled(spec.parity())).unwrap();
        let tripod = ChainVector::from_graph(&corona(3), spec.symmetry()).unwrap();
        let expected = ChainVector::from_graph(&decode("N3 k1 | i1>i1 i1>1 i1>2 i1>3").unwrap(), spec.symmetry()).unwrap();
        assert_eq!(vertex_insertion(&l1, &tripod, &spec).unwrap(), expected);
        // the pointed tadpole glued back onto the centre cancels the insertion
        assert!(gc_action(&l1, &tripod, &spec).unwrap().is_zero());
    }

    #[test]
    fn unit_is_annihilated() {
        for n in 2..4 {
            let (_, gs) = gammas(n);
            let spec = ComplexSpec::operadic(Family::Graphs2, n, 1).unwrap();
            let unit = ChainVector::from_graph(&Graph::from_ids(1, 0, vec![]).unwrap(), spec.symmetry()).unwrap();
            for g in &gs {
                assert!(gc_action(g, &unit, &spec).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn derivation_of_composition() {
        for n in 2..4 {
            let (gc, gs) = gammas(n);
            let s2 = ComplexSpec::operadic(Family::Graphs2, n, 2).unwrap();
            let s3 = ComplexSpec::operadic(Family::Graphs2, n, 3).unwrap();
            let xs = basis(&s2, &Window::loops(0).with_max_internal(1));
            for g in &gs {
                let dg = degree(g, &gc);
                for x in &xs {
                    for y in &xs {
                        let lhs = gc_action(g, &compose(x, 1, y).unwrap(), &s3).unwrap();
                        let mut rhs = compose(&gc_action(g, x, &s2).unwrap(), 1, y).unwrap();
                        let tail = compose(x, 1, &gc_action(g, y, &s2).unwrap()).unwrap();
                        rhs.add_scaled(&tail, &sign(dg * degree(x, &s2)));
                        assert_eq!(lhs, rhs, "n={n}");
                    }
                }
            }
        }
    }
}
