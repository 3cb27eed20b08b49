use graphcx::complexes::{bracket, compose, cup, differential, enumerate, ComplexSpec, Family, HairBound, Window};
use graphcx::graph::{canonicalize, Canon, ChainVector, Coeff, ExternalMode, Graph, Parity, Symmetry};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::OnceLock;

fn raw_graph() -> impl Strategy<Value = Graph> {
    (0usize..3, 1usize..4).prop_filter("two vertices", |(e, i)| e + i >= 2).prop_flat_map(|(ext, int)| {
        let v = (ext + int) as u8;
        prop::collection::vec((0..v, 1..v), 1..7).prop_map(move |pairs| {
            let edges = pairs.into_iter().map(|(a, off)| (a, (a + off) % v)).collect();
            Graph::from_ids(ext, int, edges).expect("ids are in range")
        })
    })
}

fn symmetry() -> impl Strategy<Value = Symmetry> {
    prop_oneof![
        Just(Symmetry::labeled(Parity::Even)),
        Just(Symmetry::labeled(Parity::Odd)),
        Just(Symmetry::hairy(Parity::Even, 1)),
        Just(Symmetry::hairy(Parity::Odd, 2)),
    ]
}

fn sign(c: &Canon) -> Option<(&graphcx::graph::CanonicalGraph, i8)> {
    match c {
        Canon::Zero => None,
        Canon::Graph(g, s) => Some((g, *s)),
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

fn perm_parity(p: &[usize]) -> usize {
    (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[j] < p[i]).count()).sum::<usize>() % 2
}

/// Zero iff some automorphism reverses the orientation, found by trying every vertex and edge bijection.
fn brute_force_zero(g: &Graph, sym: Symmetry) -> bool {
    let (n, k) = (g.num_external(), g.num_internal());
    let hairs_move = !sym.externals.is_labeled();
    let movable: Vec<usize> = if hairs_move { (0..n + k).collect() } else { (n..n + k).collect() };
    let edges = g.edges();
    for p in permutations(movable.len()) {
        let mut map: Vec<u8> = (0..(n + k) as u8).collect();
        for (i, &j) in p.iter().enumerate() {
            map[movable[i]] = movable[j] as u8;
        }
        if hairs_move && (0..n).any(|v| (map[v] as usize) >= n) {
            continue;
        }
        let moved: Vec<(u8, u8)> = edges.iter().map(|&(a, b)| (map[a as usize], map[b as usize])).collect();
        for ep in permutations(edges.len()) {
            let mut flips = 0;
            let ok = ep.iter().enumerate().all(|(i, &j)| {
                let (a, b) = moved[i];
                let (c, d) = edges[j];
                if (a, b) == (c, d) {
                    true
                } else if (a, b) == (d, c) {
                    flips += 1;
                    true
                } else {
                    false
                }
            });
            if !ok {
                continue;
            }
            let internal_perm: Vec<usize> = (n..n + k).map(|v| map[v] as usize - n).collect();
            let hair_perm: Vec<usize> = (0..n).map(|v| map[v] as usize).collect();
            let s = match sym.parity {
                Parity::Even => perm_parity(&ep),
                Parity::Odd => perm_parity(&internal_perm) + flips,
            } + if sym.externals == ExternalMode::Antisymmetric { perm_parity(&hair_perm) } else { 0 };
            if s % 2 == 1 {
                return true;
            }
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonicalization_is_idempotent(g in raw_graph(), sym in symmetry()) {
        if let Ok(Canon::Graph(c, _)) = canonicalize(&g, sym) {
            let again = canonicalize(c.graph(), sym).unwrap();
            prop_assert_eq!(again, Canon::Graph(c.clone(), 1));
        }
    }

    #[test]
    fn orientation_changes_flip_signs(g in raw_graph(), sym in symmetry(), i in 0usize..8, j in 0usize..8) {
        let Ok(base) = canonicalize(&g, sym) else { return Ok(()) };
        let e = g.num_edges();
        let (i, j) = (i % e, j % e);
        let mut swapped = g.clone();
        swapped.swap_edges(i, j);
        let mut flipped = g.clone();
        flipped.flip_edge(i);
        let odd = sym.parity == Parity::Odd;
        let expect_swap: i8 = if !odd && i != j { -1 } else { 1 };
        let expect_flip: i8 = if odd { -1 } else { 1 };
        for (h, s) in [(swapped, expect_swap), (flipped, expect_flip)] {
            let c = canonicalize(&h, sym).unwrap();
            match (sign(&base), sign(&c)) {
                (None, None) => {}
                (Some((g0, s0)), Some((g1, s1))) => {
                    prop_assert_eq!(g0, g1);
                    prop_assert_eq!(s1, s0 * s);
                }
                other => prop_assert!(false, "zero mismatch {:?}", other),
            }
        }
    }

    #[test]
    fn zero_detection_matches_brute_force(g in raw_graph(), sym in symmetry()) {
        prop_assume!(g.num_edges() <= 6);
        let c = canonicalize(&g, sym).unwrap();
        prop_assert_eq!(c.is_zero(), brute_force_zero(&g, sym), "{}", graphcx::graph::encode(&g));
    }
}

struct Pool {
    spec: ComplexSpec,
    graphs: Vec<(i64, Graph)>,
}

fn pool(m: i64, n: i64) -> &'static Pool {
    static P12: OnceLock<Pool> = OnceLock::new();
    static P23: OnceLock<Pool> = OnceLock::new();
    let cell = if (m, n) == (1, 2) { &P12 } else { &P23 };
    cell.get_or_init(|| {
        let spec = ComplexSpec::hairy(Family::HGC, m, n).unwrap();
        let mut graphs = Vec::new();
        for j in 0..2 {
            let w = Window::loops(j).with_hairs(HairBound::AtMost(4)).with_max_internal(3);
            let t = enumerate(&spec, &w).unwrap();
            graphs.extend(t.iter().map(|(d, g)| (d, g.graph().clone())));
        }
        Pool { spec, graphs }
    })
}

fn chain(p: &Pool, picks: &[(usize, i64)]) -> (ChainVector, i64) {
    let d = p.graphs[picks[0].0 % p.graphs.len()].0;
    let same: Vec<&Graph> = p.graphs.iter().filter(|(e, _)| *e == d).map(|(_, g)| g).collect();
    let mut x = ChainVector::new(p.spec.symmetry());
    for (i, c) in picks {
        x.add_graph(same[i % same.len()], &Coeff::from_integer(BigInt::from(*c))).unwrap();
    }
    (x, d)
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..1000, -3i64..4), 1..3)
}

fn koszul(a: i64, b: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(if (a * b) % 2 == 0 { 1 } else { -1 }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_graded_antisymmetric(mn in prop_oneof![Just((1, 2)), Just((2, 3))], a in picks(), b in picks()) {
        let p = pool(mn.0, mn.1);
        let ((x, dx), (y, dy)) = (chain(p, &a), chain(p, &b));
        let xy = bracket(&x, &y, &p.spec).unwrap();
        let mut yx = bracket(&y, &x, &p.spec).unwrap().scaled(&koszul(dx, dy));
        yx.add_assign(&xy);
        prop_assert!(yx.is_zero());
    }

    #[test]
    fn bracket_satisfies_jacobi(mn in prop_oneof![Just((1, 2)), Just((2, 3))], a in picks(), b in picks(), c in picks()) {
        let p = pool(mn.0, mn.1);
        let ((x, dx), (y, dy), (z, _)) = (chain(p, &a), chain(p, &b), chain(p, &c));
        let br = |u: &ChainVector, v: &ChainVector| bracket(u, v, &p.spec).unwrap();
        let mut lhs = br(&x, &br(&y, &z));
        lhs.sub_assign(&br(&br(&x, &y), &z));
        lhs.add_scaled(&br(&y, &br(&x, &z)), &-koszul(dx, dy));
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn differential_is_a_derivation(mn in prop_oneof![Just((1, 2)), Just((2, 3))], a in picks(), b in picks()) {
        let p = pool(mn.0, mn.1);
        let ((x, dx), (y, _)) = (chain(p, &a), chain(p, &b));
        let d = |u: &ChainVector| differential(u, &p.spec).unwrap();
        let br = |u: &ChainVector, v: &ChainVector| bracket(u, v, &p.spec).unwrap();
        let mut lhs = d(&br(&x, &y));
        lhs.sub_assign(&br(&d(&x), &y));
        lhs.add_scaled(&br(&x, &d(&y)), &-koszul(dx, 1));
        prop_assert!(lhs.is_zero());
    }

    #[test]
    fn degrees_add(mn in prop_oneof![Just((1, 2)), Just((2, 3))], a in picks(), b in picks()) {
        let p = pool(mn.0, mn.1);
        let ((x, dx), (y, dy)) = (chain(p, &a), chain(p, &b));
        for (g, _) in bracket(&x, &y, &p.spec).unwrap().iter() {
            prop_assert_eq!(p.spec.degree(g.graph()).unwrap(), dx + dy);
        }
        for (g, _) in cup(&x, &y, &p.spec).unwrap().iter() {
            prop_assert_eq!(p.spec.degree(g.graph()).unwrap(), dx + dy - mn.0);
        }
        for (g, _) in differential(&x, &p.spec).unwrap().iter() {
            prop_assert_eq!(p.spec.degree(g.graph()).unwrap(), dx - 1);
        }
    }

    #[test]
    fn composition_degrees_add(n in 2i64..4, i in 0usize..100, j in 0usize..100, slot in 0usize..2) {
        let spec2 = ComplexSpec::operadic(Family::Graphs, n, 2).unwrap();
        let pool2 = enumerate(&spec2, &Window::loops(0).with_max_internal(1)).unwrap();
        let gs: Vec<(i64, Graph)> = pool2.iter().map(|(d, g)| (d, g.graph().clone())).collect();
        let (dx, gx) = &gs[i % gs.len()];
        let (dy, gy) = &gs[j % gs.len()];
        let x = ChainVector::from_graph(gx, spec2.symmetry()).unwrap();
        let y = ChainVector::from_graph(gy, spec2.symmetry()).unwrap();
        let spec3 = ComplexSpec::operadic(Family::Graphs, n, 3).unwrap();
        for (g, _) in compose(&x, slot + 1, &y).unwrap().iter() {
            prop_assert_eq!(spec3.degree(g.graph()).unwrap(), dx + dy);
        }
    }
}
