//! The cup product on `Poiss_m ⊗ Graphs_n` deformation complexes, built from a Maurer–Cartan element.

use super::graphs::{symmetry, ForestImages};
use super::{compose_poisson, poisson_to_graphs, t12, Forest, LieWord, PoissonElement, PoissonError};
use crate::complexes::{compose, ComplexSpec};
use crate::graph::{canonicalize, Canon, CanonicalGraph, ChainVector, Coeff, Graph};
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use std::collections::BTreeMap;

/// A finite sum of terms `forest ⊗ graph` with the graph in `Graphs_n` of the forest's arity.
#[derive(Debug, Clone, PartialEq)]
pub struct DefElement {
    pub m: i64,
    pub n: i64,
    terms: FxHashMap<(Forest, CanonicalGraph), Coeff>,
}

fn commutative(arity: usize) -> Forest {
    Forest::new((1..=arity as u8).map(|l| LieWord::new(vec![l]).expect("single letter")).collect()).expect("singletons")
}

impl DefElement {
    pub fn zero(m: i64, n: i64) -> Self {
        DefElement { m, n, terms: FxHashMap::default() }
    }

    /// The unit: empty forest tensor the empty graph.
    pub fn unit(m: i64, n: i64) -> Self {
        let mut x = Self::zero(m, n);
        x.add_term(commutative(0), &Graph::from_ids(0, 0, vec![]).expect("empty graph"), &Coeff::one());
        x
    }

    /// `[1,2] ⊗ (two vertices, no edge)`: the binary part of a map factoring through the commutative operad.
    pub fn commutative_product(m: i64, n: i64) -> Self {
        let mut x = Self::zero(m, n);
        let bracket = Forest::new(vec![LieWord::new(vec![1, 2]).expect("word")]).expect("forest");
        x.add_term(bracket, &Graph::from_ids(2, 0, vec![]).expect("pair"), &Coeff::one());
        x
    }

    /// Hairy graphs as `1^2^..^H ⊗ Γ`.
    pub fn from_hairy(x: &ChainVector, m: i64, n: i64) -> Self {
        let mut out = Self::zero(m, n);
        for (g, c) in x.iter() {
            out.add_term(commutative(g.graph().num_external()), g.graph(), c);
        }
        out
    }

    pub fn add_term(&mut self, f: Forest, g: &Graph, c: &Coeff) {
        if let Ok(Canon::Graph(cg, s)) = canonicalize(g, symmetry(self.n)) {
            let c = if s > 0 { c.clone() } else { -c.clone() };
            let e = self.terms.entry((f.clone(), cg.clone())).or_insert_with(Coeff::zero);
            *e += c;
            if e.is_zero() {
                self.terms.remove(&(f, cg));
            }
        }
    }

    pub fn add_poisson_tensor(&mut self, p: &PoissonElement, g: &ChainVector, c: &Coeff) {
        for (f, a) in p.terms() {
            for (h, b) in g.iter() {
                self.add_term(f.clone(), h.graph(), &(c * a * b));
            }
        }
    }

    pub fn add_scaled(&mut self, other: &DefElement, c: &Coeff) {
        for ((f, g), x) in &other.terms {
            self.add_term(f.clone(), g.graph(), &(x * c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &CanonicalGraph, &Coeff)> {
        self.terms.iter().map(|((f, g), c)| (f, g, c))
    }

    /// Groups terms into pure tensors `x' ⊗ x''` with `x'` a single forest.
    fn by_forest(&self) -> BTreeMap<Forest, ChainVector> {
        let mut out: BTreeMap<Forest, ChainVector> = BTreeMap::new();
        for ((f, g), c) in &self.terms {
            out.entry(f.clone()).or_insert_with(|| ChainVector::new(symmetry(self.n))).add_canonical(g.clone(), c.clone());
        }
        out
    }

    /// Total excess `-h + E - k` of each term, if all agree.
    pub fn total_excess(&self) -> Option<i64> {
        let mut out = None;
        for (f, g, _) in self.terms() {
            let e = crate::complexes::total_excess(f.dual_hodge(), g.graph());
            if out.is_some_and(|o| o != e) {
                return None;
            }
            out = Some(e);
        }
        out
    }

    /// The hairy chain of a sum of commutative terms, with hairs made indistinguishable.
    pub fn to_hairy(&self, spec: &ComplexSpec) -> Result<ChainVector, PoissonError> {
        let mut out = ChainVector::new(spec.symmetry());
        for (f, g, c) in self.terms() {
            if f.hodge() != 0 {
                return Err(PoissonError::Unsupported(format!("term {f} is not commutative")));
            }
            out.add_graph(g.graph(), c).map_err(crate::complexes::ComplexError::from)?;
        }
        Ok(out)
    }
}

fn sign(e: i64) -> Coeff {
    if e.rem_euclid(2) == 0 { Coeff::one() } else { -Coeff::one() }
}

/// Shuffles of `a` and `b` letters as images of positions, with their signs.
fn shuffles(a: usize, b: usize) -> Vec<(Vec<u8>, i64)> {
    let mut out = Vec::new();
    let total = a + b;
    for mask in 0u32..(1 << total) {
        if mask.count_ones() as usize != a {
            continue;
        }
        let first: Vec<u8> = (0..total as u8).filter(|&i| mask & (1 << i) != 0).collect();
        let second: Vec<u8> = (0..total as u8).filter(|&i| mask & (1 << i) == 0).collect();
        let perm: Vec<u8> = first.iter().chain(second.iter()).copied().collect();
        let inversions = first.iter().map(|&f| second.iter().filter(|&&s| s < f).count()).sum::<usize>();
        out.push((perm, inversions as i64));
    }
    out
}

fn relabel_chain(x: &ChainVector, perm: &[u8]) -> ChainVector {
    let mut out = ChainVector::new(x.symmetry());
    for (g, c) in x.iter() {
        let g = g.graph();
        let full: Vec<u8> = (0..g.num_vertices() as u8).map(|v| perm.get(v as usize).copied().unwrap_or(v)).collect();
        out.add_graph_unchecked(&g.relabel(&full), c);
    }
    out
}

struct ImageCache {
    m: i64,
    images: BTreeMap<usize, ForestImages>,
}

impl ImageCache {
    fn new(m: i64) -> Self {
        ImageCache { m, images: BTreeMap::new() }
    }

    /// A relabeled Lie word in the comb basis, as `(word, coefficient)` pairs.
    fn relabel_word(&mut self, letters: &[u8]) -> Result<Vec<(LieWord, Coeff)>, PoissonError> {
        if letters.iter().min() == letters.first() {
            return Ok(vec![(LieWord::new(letters.to_vec())?, Coeff::one())]);
        }
        let mut sorted = letters.to_vec();
        sorted.sort_unstable();
        let local: Vec<u8> = letters.iter().map(|l| sorted.iter().position(|s| s == l).expect("own letter") as u8 + 1).collect();
        let identity = LieWord::new((1..=local.len() as u8).collect())?;
        let perm: Vec<u8> = local.iter().map(|l| l - 1).collect();
        let word = PoissonElement::from_forest(self.m, Forest::new(vec![identity])?);
        let img = relabel_chain(&poisson_to_graphs(&word), &perm);
        let m = self.m;
        let pre = self.images.entry(local.len()).or_insert_with(|| ForestImages::new(m, local.len())).preimage(&img)?;
        pre.terms()
            .map(|(f, c)| {
                let w = f.blocks().first().ok_or_else(|| PoissonError::NotInImage("empty preimage".into()))?;
                Ok((LieWord::new(w.letters().iter().map(|&l| sorted[l as usize - 1]).collect())?, c.clone()))
            })
            .collect()
    }

    /// Renames letter `l` to `perm[l-1] + 1` (letters past `perm` are kept).
    fn relabel_forest(&mut self, f: &Forest, perm: &[u8]) -> Result<PoissonElement, PoissonError> {
        let rename = |l: u8| perm.get(l as usize - 1).map_or(l, |p| p + 1);
        let mut partial: Vec<(Vec<LieWord>, Coeff)> = vec![(vec![], Coeff::one())];
        for b in f.blocks() {
            let letters: Vec<u8> = b.letters().iter().map(|&l| rename(l)).collect();
            let options = self.relabel_word(&letters)?;
            partial = partial
                .into_iter()
                .flat_map(|(ws, c)| options.iter().map(move |(w, d)| ([ws.clone(), vec![w.clone()]].concat(), &c * d)))
                .collect();
        }
        let mut out = PoissonElement::zero(self.m, f.arity());
        for (ws, c) in partial {
            out.add(Forest::new(ws.clone())?, &c * block_sort_sign(&ws, self.m));
        }
        Ok(out)
    }

    fn relabel(&mut self, p: &PoissonElement, perm: &[u8]) -> Result<PoissonElement, PoissonError> {
        let mut out = PoissonElement::zero(self.m, p.arity);
        for (f, c) in p.terms() {
            out.add_scaled(&self.relabel_forest(f, perm)?, c);
        }
        Ok(out)
    }
}

/// `a ∘_{1,2} (x, y)` for a commutative forest `a`: the blocks of `x`, then `y`, then the rest of `a`.
fn compose_into_commutative(a: &Forest, x: &Forest, y: &Forest, m: i64) -> Result<PoissonElement, PoissonError> {
    let (nx, ny) = (x.arity() as u8, y.arity() as u8);
    let shift = |w: &LieWord, by: u8| LieWord::new(w.letters().iter().map(|l| l + by).collect());
    let mut ws: Vec<LieWord> = x.blocks().to_vec();
    for w in y.blocks() {
        ws.push(shift(w, nx)?);
    }
    for l in 3..=a.arity() as u8 {
        ws.push(LieWord::new(vec![l + nx + ny - 2])?);
    }
    let mut out = PoissonElement::zero(m, ws.iter().map(LieWord::len).sum());
    let s = block_sort_sign(&ws, m);
    out.add(Forest::new(ws)?, s);
    Ok(out)
}

fn compose_pair(a: &PoissonElement, x: &Forest, y: &Forest) -> Result<PoissonElement, PoissonError> {
    if a.terms().all(|(f, _)| f.hodge() == 0) {
        let mut out = PoissonElement::zero(a.n, a.arity + x.arity() + y.arity() - 2);
        for (f, c) in a.terms() {
            out.add_scaled(&compose_into_commutative(f, x, y, a.n)?, c);
        }
        return Ok(out);
    }
    let xp = PoissonElement::from_forest(a.n, x.clone());
    let yp = PoissonElement::from_forest(a.n, y.clone());
    compose_poisson(&compose_poisson(a, 1, &xp)?, x.arity() + 1, &yp)
}

/// Sign of sorting blocks by first letter, each block carrying `(m-1)(len-1)` as its parity.
fn block_sort_sign(ws: &[LieWord], m: i64) -> Coeff {
    let odd = |w: &LieWord| (m - 1) * (w.len() as i64 - 1) % 2 != 0;
    let mut swaps = 0;
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            if ws[j].letters()[0] < ws[i].letters()[0] && odd(&ws[i]) && odd(&ws[j]) {
                swaps += 1;
            }
        }
    }
    sign(swaps)
}

/// `x ∪ y = Σ ± σ·(((t12·m') ∘_{1,2} (x', y')) ⊗ (m'' ∘_{1,2} (x'', y'')))` over the terms of
/// `mc` of arity at least two and the shuffles `σ` of the letters of `x` and `y`.
pub fn cup_general(x: &DefElement, y: &DefElement, mc: &DefElement) -> Result<DefElement, PoissonError> {
    let (m, n) = (mc.m, mc.n);
    if x.m != m || y.m != m || x.n != n || y.n != n {
        return Err(PoissonError::Arity("cup factors and Maurer-Cartan element live in different complexes".into()));
    }
    let mut cache = ImageCache::new(m);
    let mut out = DefElement::zero(m, n);
    let (xs, ys) = (x.by_forest(), y.by_forest());
    for (mf, mg) in mc.by_forest() {
        if mf.arity() < 2 {
            continue;
        }
        let a = t12(&PoissonElement::from_forest(m, mf))?;
        if a.is_zero() {
            continue;
        }
        for (xf, xg) in &xs {
            let nx = xf.arity();
            for (yf, yg) in &ys {
                let ny = yf.arity();
                let p = compose_pair(&a, xf, yf)?;
                let g = compose(&compose(&mg, 1, xg)?, nx + 1, yg)?;
                if p.is_zero() || g.is_zero() {
                    continue;
                }
                let deg_y = (m - 1) * yf.hodge() as i64;
                let deg_xg = homogeneous_degree(xg, n);
                let koszul = sign(deg_xg * deg_y);
                for (perm, inv) in shuffles(nx, ny) {
                    let s = &koszul * sign(m * inv);
                    let pp = cache.relabel(&p, &perm)?;
                    let gg = relabel_chain(&g, &perm);
                    out.add_poisson_tensor(&pp, &gg, &s);
                }
            }
        }
    }
    Ok(out)
}

fn homogeneous_degree(x: &ChainVector, n: i64) -> i64 {
    x.iter()
        .next()
        .map(|(g, _)| {
            let g = g.graph();
            (n - 1) * g.num_edges() as i64 - n * g.num_internal() as i64
        })
        .unwrap_or(0)
}
