//! The inclusion of `Poiss_n` into `Graphs_n` and operations pulled back along it.

use super::parse::Expr;
use super::{forest_basis, Forest, PoissonElement, PoissonError};
use crate::complexes::compose;
use crate::graph::{CanonicalGraph, ChainVector, Coeff, Graph, Parity, Symmetry};
use crate::homology::SparseMatrix;
use num_traits::Zero;
use rustc_hash::FxHashMap;

pub(super) fn symmetry(n: i64) -> Symmetry {
    Symmetry::labeled(Parity::of(n))
}

/// Edge lists of one left-normed word: each later letter is joined to an earlier one,
/// and the edge of the last letter comes first.
fn word_edges(letters: &[u8]) -> Vec<Vec<(u8, u8)>> {
    let mut out = vec![vec![]];
    for (i, &c) in letters.iter().enumerate().skip(1) {
        out = out
            .into_iter()
            .flat_map(|tail: Vec<(u8, u8)>| {
                letters[..i].iter().map(move |&p| {
                    let mut e = vec![(p - 1, c - 1)];
                    e.extend(tail.iter().copied());
                    e
                })
            })
            .collect();
    }
    out
}

/// Image in `Graphs_n(N)`: products become disjoint unions and brackets edges.
pub fn poisson_to_graphs(x: &PoissonElement) -> ChainVector {
    let sym = symmetry(x.n);
    let mut out = ChainVector::new(sym);
    for (f, c) in x.terms() {
        for edges in forest_edge_lists(f) {
            out.add_graph_unchecked(&Graph::from_ids(f.arity(), 0, edges).expect("forest edges are in range"), c);
        }
    }
    out
}

fn forest_edge_lists(f: &Forest) -> Vec<Vec<(u8, u8)>> {
    let mut lists: Vec<Vec<(u8, u8)>> = vec![vec![]];
    for b in f.blocks() {
        let words = word_edges(b.letters());
        lists = lists.into_iter().flat_map(|l| words.iter().map(move |w| [l.clone(), w.clone()].concat())).collect();
    }
    lists
}

/// Moves external `i` to `perm[i]`.
fn relabel_externals(x: &ChainVector, perm: &[u8]) -> ChainVector {
    let mut out = ChainVector::new(x.symmetry());
    for (g, c) in x.iter() {
        let g = g.graph();
        let full: Vec<u8> = (0..g.num_vertices() as u8).map(|v| if (v as usize) < perm.len() { perm[v as usize] } else { v }).collect();
        out.add_graph_unchecked(&g.relabel(&full), c);
    }
    out
}

fn generator(n: i64, edge: bool) -> ChainVector {
    let edges = if edge { vec![(0, 1)] } else { vec![] };
    ChainVector::from_graph(&Graph::from_ids(2, 0, edges).expect("generator"), symmetry(n)).expect("generator")
}

/// `g(a, b)` for a binary generator, `b`'s externals after `a`'s.
fn binary(n: i64, edge: bool, a: &ChainVector, b: &ChainVector, arity_a: usize) -> ChainVector {
    let first = compose(&generator(n, edge), 1, a).expect("slot 1 exists");
    compose(&first, arity_a + 1, b).expect("slot after a exists")
}

impl Expr {
    /// Graph image on the expression's letters, renumbered `1..N` in increasing order.
    pub fn to_graphs(&self, n: i64) -> ChainVector {
        let (chain, letters) = self.eval_graphs(n);
        let mut sorted = letters.clone();
        sorted.sort_unstable();
        let perm: Vec<u8> = letters.iter().map(|l| sorted.binary_search(l).expect("letter present") as u8).collect();
        relabel_externals(&chain, &perm)
    }

    fn eval_graphs(&self, n: i64) -> (ChainVector, Vec<u8>) {
        match self {
            Expr::Letter(l) => {
                let unit = ChainVector::from_graph(&Graph::from_ids(1, 0, vec![]).expect("unit"), symmetry(n)).expect("unit");
                (unit, vec![*l])
            }
            Expr::Bracket(a, b) => {
                let (ga, la) = a.eval_graphs(n);
                let (gb, lb) = b.eval_graphs(n);
                (binary(n, true, &ga, &gb, la.len()), [la, lb].concat())
            }
            Expr::Product(factors) => {
                let (mut acc, mut letters) = factors[0].eval_graphs(n);
                for f in &factors[1..] {
                    let (g, l) = f.eval_graphs(n);
                    acc = binary(n, false, &acc, &g, letters.len());
                    letters.extend(l);
                }
                (acc, letters)
            }
        }
    }
}

/// Graph images of the forest basis in one arity, for solving back into forests.
pub struct ForestImages {
    n: i64,
    arity: usize,
    forests: Vec<Forest>,
    rows: FxHashMap<CanonicalGraph, usize>,
    matrix: SparseMatrix,
}

impl ForestImages {
    pub fn new(n: i64, arity: usize) -> Self {
        let forests = forest_basis(arity);
        let mut rows: FxHashMap<CanonicalGraph, usize> = FxHashMap::default();
        let mut triplets = Vec::new();
        for (j, f) in forests.iter().enumerate() {
            let img = poisson_to_graphs(&PoissonElement::from_forest(n, f.clone()));
            for (g, c) in img.iter() {
                let next = rows.len();
                let i = *rows.entry(g.clone()).or_insert(next);
                triplets.push((i, j, c.clone()));
            }
        }
        let matrix = SparseMatrix::from_triplets(rows.len(), forests.len(), triplets).expect("indices are in range");
        ForestImages { n, arity, forests, rows, matrix }
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn num_graphs(&self) -> usize {
        self.rows.len()
    }

    /// The Poisson element mapping to `x`.
    pub fn preimage(&self, x: &ChainVector) -> Result<PoissonElement, PoissonError> {
        let mut b = vec![Coeff::zero(); self.rows.len()];
        for (g, c) in x.iter() {
            if g.graph().num_external() != self.arity {
                return Err(PoissonError::Arity(format!("graph {g} is not of arity {}", self.arity)));
            }
            match self.rows.get(g) {
                Some(&i) => b[i] = c.clone(),
                None => return Err(PoissonError::NotInImage(g.encode())),
            }
        }
        let sol = self.matrix.solve(&b).map_err(|e| PoissonError::NotInImage(e.to_string()))?;
        let sol = sol.ok_or_else(|| PoissonError::NotInImage("graph combination outside the span of forests".into()))?;
        let mut out = PoissonElement::zero(self.n, self.arity);
        for (f, c) in self.forests.iter().zip(sol) {
            out.add(f.clone(), c);
        }
        Ok(out)
    }
}

/// Normal form of an expression in the forest basis.
pub(super) fn normal_form(e: &Expr, n: i64) -> Result<PoissonElement, PoissonError> {
    let arity = e.arity()?;
    ForestImages::new(n, arity).preimage(&e.to_graphs(n))
}

/// `[x, y]` with the letters of `y` shifted past those of `x`.
pub fn poisson_bracket(x: &PoissonElement, y: &PoissonElement) -> Result<PoissonElement, PoissonError> {
    if x.n != y.n {
        return Err(PoissonError::Arity("brackets of different operads".into()));
    }
    let g = binary(x.n, true, &poisson_to_graphs(x), &poisson_to_graphs(y), x.arity);
    ForestImages::new(x.n, x.arity + y.arity).preimage(&g)
}

/// Operadic composition `x ∘_slot y` (1-based).
pub fn compose_poisson(x: &PoissonElement, slot: usize, y: &PoissonElement) -> Result<PoissonElement, PoissonError> {
    if slot == 0 || slot > x.arity {
        return Err(PoissonError::Arity(format!("slot {slot} outside arity {}", x.arity)));
    }
    let g = compose(&poisson_to_graphs(x), slot, &poisson_to_graphs(y))?;
    ForestImages::new(x.n, x.arity + y.arity - 1).preimage(&g)
}

/// Removes the edge between 1 and 2, moved to the front and oriented `1>2`; zero if there is none.
pub(super) fn remove_edge_12(x: &ChainVector) -> Result<ChainVector, PoissonError> {
    let mut out = ChainVector::new(x.symmetry());
    let odd = x.symmetry().parity == Parity::Odd;
    for (g, c) in x.iter() {
        let g = g.graph();
        let hits: Vec<usize> = (0..g.num_edges()).filter(|&i| matches!(g.edges()[i], (0, 1) | (1, 0))).collect();
        match hits.as_slice() {
            [] => {}
            [i] => {
                let s: i64 = match (odd, g.edges()[*i] == (0, 1), i % 2 == 0) {
                    (true, true, _) | (false, _, true) => 1,
                    _ => -1,
                };
                let mut edges = g.edges().to_vec();
                edges.remove(*i);
                let h = Graph::from_ids(g.num_external(), g.num_internal(), edges).expect("subgraph");
                out.add_graph_unchecked(&h, &(c * Coeff::from_integer(s.into())));
            }
            _ => return Err(PoissonError::Unsupported(format!("{} has several edges between 1 and 2", crate::graph::encode(g)))),
        }
    }
    Ok(out)
}

/// `t12` on `Poiss_n`: removes the edge between 1 and 2 in the graph picture.
pub fn t12(x: &PoissonElement) -> Result<PoissonElement, PoissonError> {
    if x.arity < 2 {
        return Ok(PoissonElement::zero(x.n, x.arity));
    }
    ForestImages::new(x.n, x.arity).preimage(&remove_edge_12(&poisson_to_graphs(x))?)
}
