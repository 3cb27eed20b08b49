//! Forest bases of the Poisson operads, their graph images, PBW and `t12`.

mod cup;
mod graphs;
mod parse;
mod pbw;

pub use cup::{cup_general, DefElement};
pub use graphs::{compose_poisson, poisson_bracket, poisson_to_graphs, t12, ForestImages};
pub use parse::{parse_expr, Expr};
pub use pbw::{filtration_check, pbw, t12_assoc, AssocElement, FiltrationReport};

use crate::complexes::ComplexError;
use crate::graph::Coeff;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoissonError {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("not in the image of the Poisson operad: {0}")]
    NotInImage(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A left-normed bracket `[..[[w0,w1],w2]..,wr]` whose first letter is the smallest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LieWord(Vec<u8>);

impl LieWord {
    pub fn new(letters: Vec<u8>) -> Result<Self, PoissonError> {
        let min = letters.iter().min().ok_or_else(|| PoissonError::Arity("empty Lie word".into()))?;
        if letters[0] != *min {
            return Err(PoissonError::Arity(format!("Lie word {letters:?} must start with its smallest letter")));
        }
        Ok(LieWord(letters))
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for LieWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = self.0[0].to_string();
        for l in &self.0[1..] {
            s = format!("[{s},{l}]");
        }
        f.write_str(&s)
    }
}

/// A product of Lie words partitioning `{1..N}`, blocks ordered by first letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Forest(Vec<LieWord>);

impl Forest {
    pub fn new(mut blocks: Vec<LieWord>) -> Result<Self, PoissonError> {
        blocks.sort_by_key(|b| b.0[0]);
        let mut letters: Vec<u8> = blocks.iter().flat_map(|b| b.0.iter().copied()).collect();
        letters.sort_unstable();
        if letters.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
            return Err(PoissonError::Arity(format!("blocks must partition 1..{}", letters.len())));
        }
        Ok(Forest(blocks))
    }

    pub fn blocks(&self) -> &[LieWord] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.iter().map(LieWord::len).sum()
    }

    /// Number of brackets.
    pub fn hodge(&self) -> usize {
        self.arity() - self.0.len()
    }

    /// Number of factors minus one.
    pub fn dual_hodge(&self) -> i64 {
        self.0.len() as i64 - 1
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("^"))
    }
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<u8>>> {
    let mut out: Vec<Vec<Vec<u8>>> = vec![vec![]];
    for l in 1..=n as u8 {
        let mut next = Vec::new();
        for p in &out {
            for i in 0..p.len() {
                let mut q: Vec<Vec<u8>> = p.clone();
                q[i].push(l);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![l]);
            next.push(q);
        }
        out = next;
    }
    out
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All forests on `{1..N}`: `N!` of them, sorted.
pub fn forest_basis(arity: usize) -> Vec<Forest> {
    let mut out = Vec::new();
    for part in set_partitions(arity) {
        let mut forests: Vec<Vec<LieWord>> = vec![vec![]];
        for block in &part {
            let (first, rest) = block.split_first().expect("blocks are non-empty");
            let words: Vec<LieWord> = permutations(rest)
                .into_iter()
                .map(|p| LieWord(std::iter::once(*first).chain(p).collect()))
                .collect();
            forests = forests.into_iter().flat_map(|f| words.iter().map(move |w| [f.clone(), vec![w.clone()]].concat())).collect();
        }
        out.extend(forests.into_iter().map(|f| Forest::new(f).expect("partition blocks")));
    }
    out.sort();
    out
}

/// Sizes of the forest basis by dual Hodge degree.
pub fn dual_hodge_profile(arity: usize) -> BTreeMap<i64, usize> {
    let mut m = BTreeMap::new();
    for f in forest_basis(arity) {
        *m.entry(f.dual_hodge()).or_insert(0) += 1;
    }
    m
}

/// A linear combination of forests in `Poiss_n(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoissonElement {
    pub n: i64,
    pub arity: usize,
    terms: BTreeMap<Forest, Coeff>,
}

impl PoissonElement {
    pub fn zero(n: i64, arity: usize) -> Self {
        PoissonElement { n, arity, terms: BTreeMap::new() }
    }

    pub fn from_forest(n: i64, f: Forest) -> Self {
        let mut x = Self::zero(n, f.arity());
        x.add(f, Coeff::from_integer(1.into()));
        x
    }

    pub fn add(&mut self, f: Forest, c: Coeff) {
        debug_assert_eq!(f.arity(), self.arity);
        let e = self.terms.entry(f.clone()).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&f);
        }
    }

    pub fn scaled(&self, c: &Coeff) -> PoissonElement {
        let mut out = PoissonElement::zero(self.n, self.arity);
        out.add_scaled(self, c);
        out
    }

    pub fn add_scaled(&mut self, other: &PoissonElement, c: &Coeff) {
        for (f, x) in &other.terms {
            self.add(f.clone(), x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, f: &Forest) -> Coeff {
        self.terms.get(f).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Common dual Hodge degree of all terms.
    pub fn dual_hodge(&self) -> Option<i64> {
        let mut h = None;
        for f in self.terms.keys() {
            if h.is_some_and(|h0| h0 != f.dual_hodge()) {
                return None;
            }
            h = Some(f.dual_hodge());
        }
        h
    }

    /// Degree in `Poiss_n(N)`: `n-1` per bracket.
    pub fn degree(&self) -> Option<i64> {
        let mut d = None;
        for f in self.terms.keys() {
            let df = (self.n - 1) * f.hodge() as i64;
            if d.is_some_and(|d0| d0 != df) {
                return None;
            }
            d = Some(df);
        }
        d
    }
}

impl fmt::Display for PoissonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(g, c)| format!("({c}) {g}")).collect();
        f.write_str(&parts.join(" + "))
    }
}
