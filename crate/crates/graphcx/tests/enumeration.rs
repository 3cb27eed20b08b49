use graphcx::complexes::{enumerate, loop_grading, ComplexSpec, Family, HairBound, Window};
use graphcx::graph::{canonicalize, Canon, CanonicalGraph, Graph};
use std::collections::BTreeSet;

fn multisets(pairs: &[(u8, u8)], size: usize, start: usize, cur: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..pairs.len() {
        cur.push(pairs[i]);
        multisets(pairs, size, i, cur, out);
        cur.pop();
    }
}

/// Every edge multiset on the allowed vertex counts, filtered by membership and window.
fn brute_force(spec: &ComplexSpec, w: &Window, externals: &[usize], max_internal: usize, max_edges: usize) -> BTreeSet<CanonicalGraph> {
    let mut out = BTreeSet::new();
    for &n in externals {
        for k in 0..=max_internal {
            let v = (n + k) as u8;
            let pairs: Vec<(u8, u8)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
            for e in 0..=max_edges {
                let mut all = Vec::new();
                multisets(&pairs, e, 0, &mut Vec::new(), &mut all);
                for edges in all {
                    let g = Graph::from_ids(n, k, edges).unwrap();
                    if spec.check_member(&g, false).is_err() || w.loop_order.is_some_and(|j| loop_grading(spec, &g) != j) {
                        continue;
                    }
                    if w.connected && !g.is_connected() {
                        continue;
                    }
                    if let Canon::Graph(c, _) = canonicalize(&g, spec.symmetry()).unwrap() {
                        out.insert(c);
                    }
                }
            }
        }
    }
    out
}

fn enumerated(spec: &ComplexSpec, w: &Window) -> BTreeSet<CanonicalGraph> {
    enumerate(spec, w).unwrap().iter().map(|(_, g)| g.clone()).collect()
}

#[test]
fn graph_complexes_are_complete() {
    let mut total = 0;
    for (family, n, j, v) in [(Family::GC, 2, 3, 4), (Family::GC, 3, 3, 4), (Family::GC2, 3, 2, 3), (Family::GC2, 2, 2, 3)] {
        let spec = ComplexSpec::graph_complex(family, n).unwrap();
        let w = Window::loops(j).with_max_internal(v);
        let found = enumerated(&spec, &w);
        total += found.len();
        assert_eq!(found, brute_force(&spec, &w, &[0], v, v + j as usize - 1), "{family:?} n={n} j={j}");
    }
    assert!(total > 3, "only {total} graphs");
}

#[test]
fn operadic_windows_are_complete() {
    let mut total = 0;
    for (n, arity, j, v) in [(2, 2, 1, 2), (3, 2, 1, 2), (3, 3, 0, 2), (2, 3, 1, 1)] {
        let spec = ComplexSpec::operadic(Family::Graphs, n, arity).unwrap();
        let w = Window::loops(j).with_max_internal(v);
        let found = enumerated(&spec, &w);
        total += found.len();
        assert_eq!(found, brute_force(&spec, &w, &[arity], v, arity + v + j as usize - 1), "n={n} N={arity} j={j}");
    }
    assert!(total > 3, "only {total} graphs");
}

#[test]
fn hairy_windows_are_complete() {
    let mut total = 0;
    for (m, n, j, h, v) in [(1, 2, 1, 3, 3), (2, 3, 0, 4, 2), (1, 3, 1, 2, 3)] {
        let spec = ComplexSpec::hairy(Family::HGC, m, n).unwrap();
        let w = Window::loops(j).with_hairs(HairBound::AtMost(h)).with_max_internal(v);
        let found = enumerated(&spec, &w);
        total += found.len();
        let hairs: Vec<usize> = (1..=h).collect();
        assert_eq!(found, brute_force(&spec, &w, &hairs, v, (j as usize) + v + h - 1), "m={m} n={n} j={j}");
    }
    assert!(total > 3, "only {total} graphs");
}
