//! The associative operad `e1(N) = K[S_N]`, the PBW map from `Poiss_1` and the `t12` projection.

use super::{forest_basis, Forest, PoissonElement, PoissonError};
use crate::graph::Coeff;
use crate::homology::SparseMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// A linear combination of permutations, written as one-line words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AssocElement {
    terms: BTreeMap<Vec<u8>, Coeff>,
}

impl AssocElement {
    pub fn word(w: &[u8]) -> Self {
        let mut a = AssocElement::default();
        a.add(w.to_vec(), Coeff::one());
        a
    }

    pub fn add(&mut self, w: Vec<u8>, c: Coeff) {
        let e = self.terms.entry(w.clone()).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &AssocElement, c: &Coeff) {
        for (w, x) in &other.terms {
            self.add(w.clone(), x * c);
        }
    }

    /// Concatenation, extended bilinearly.
    pub fn concat(&self, other: &AssocElement) -> AssocElement {
        let mut out = AssocElement::default();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add([a.as_slice(), b.as_slice()].concat(), x * y);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u8]) -> Coeff {
        self.terms.get(w).cloned().unwrap_or_else(Coeff::zero)
    }
}

impl fmt::Display for AssocElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}) {}", w.iter().map(u8::to_string).collect::<Vec<_>>().join("")))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Left-normed bracket expanded into commutators.
fn expand_word(letters: &[u8]) -> AssocElement {
    let mut p = AssocElement::word(&letters[..1]);
    for &c in &letters[1..] {
        let l = AssocElement::word(&[c]);
        let mut q = p.concat(&l);
        q.add_scaled(&l.concat(&p), &-Coeff::one());
        p = q;
    }
    p
}

fn orderings(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in orderings(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

fn pbw_forest(f: &Forest) -> AssocElement {
    let blocks: Vec<AssocElement> = f.blocks().iter().map(|b| expand_word(b.letters())).collect();
    let orders = orderings(blocks.len());
    let weight = Coeff::new(BigInt::one(), BigInt::from(orders.len()));
    let mut out = AssocElement::default();
    for o in orders {
        let prod = o.iter().fold(AssocElement::word(&[]), |acc, &i| acc.concat(&blocks[i]));
        out.add_scaled(&prod, &weight);
    }
    out
}

/// Symmetrization of products of Lie words with weight `1/p!` for `p` factors.
pub fn pbw(x: &PoissonElement) -> Result<AssocElement, PoissonError> {
    if x.n % 2 == 0 {
        return Err(PoissonError::Unsupported("the PBW map needs an even bracket, i.e. odd n".into()));
    }
    let mut out = AssocElement::default();
    for (f, c) in x.terms() {
        out.add_scaled(&pbw_forest(f), c);
    }
    Ok(out)
}

/// Keeps the permutations in which 1 occurs to the left of 2.
pub fn t12_assoc(a: &AssocElement) -> AssocElement {
    let mut out = AssocElement::default();
    for (w, c) in a.terms() {
        let p1 = w.iter().position(|&l| l == 1);
        let p2 = w.iter().position(|&l| l == 2);
        if matches!((p1, p2), (Some(i), Some(j)) if i < j) {
            out.add(w.clone(), c.clone());
        }
    }
    out
}

fn permutation_index(arity: usize) -> BTreeMap<Vec<u8>, usize> {
    let letters: Vec<u8> = (1..=arity as u8).collect();
    super::permutations(&letters).into_iter().enumerate().map(|(i, p)| (p, i)).collect()
}

/// The subspace `F^p e1(N)` spanned by PBW images of forests with at most `p + 1` factors.
pub struct Filtration {
    index: BTreeMap<Vec<u8>, usize>,
    levels: Vec<SparseMatrix>,
}

impl Filtration {
    pub fn new(arity: usize) -> Self {
        let index = permutation_index(arity);
        let forests = forest_basis(arity);
        let top = arity.saturating_sub(1) as i64;
        let levels = (0..=top)
            .map(|p| {
                let cols: Vec<AssocElement> = forests.iter().filter(|f| f.dual_hodge() <= p).map(pbw_forest).collect();
                let index = &index;
                let triplets = cols.iter().enumerate().flat_map(|(j, a)| a.terms().map(move |(w, c)| (index[w], j, c.clone())).collect::<Vec<_>>());
                SparseMatrix::from_triplets(index.len(), cols.len(), triplets).expect("indices are in range")
            })
            .collect();
        Filtration { index, levels }
    }

    /// Smallest `p` with `a` in `F^p`.
    pub fn level(&self, a: &AssocElement) -> Option<usize> {
        if a.is_zero() {
            return Some(0);
        }
        let mut b = vec![Coeff::zero(); self.index.len()];
        for (w, c) in a.terms() {
            b[*self.index.get(w)?] = c.clone();
        }
        self.levels.iter().position(|m| matches!(m.solve(&b), Ok(Some(_))))
    }

    pub fn contains(&self, p: usize, a: &AssocElement) -> bool {
        self.level(a).is_some_and(|l| l <= p)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(SparseMatrix::rank).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationReport {
    pub arity: usize,
    pub checked: usize,
    pub failures: Vec<String>,
    pub filtration_dims: Vec<usize>,
}

impl FiltrationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `t12` sends every PBW basis element of filtration `p` into `F^{p+1}`.
pub fn filtration_check(arity: usize) -> FiltrationReport {
    let filt = Filtration::new(arity);
    let mut failures = Vec::new();
    let forests = forest_basis(arity);
    for f in &forests {
        let img = t12_assoc(&pbw_forest(f));
        let p = f.dual_hodge() as usize;
        if !filt.contains(p + 1, &img) {
            failures.push(format!("t12 of pbw({f}) is at level {:?}, above {}", filt.level(&img), p + 1));
        }
    }
    FiltrationReport { arity, checked: forests.len(), failures, filtration_dims: filt.dims() }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_expr, poisson_bracket, t12};
    use super::*;

    fn q(a: i64, b: i64) -> Coeff {
        Coeff::new(BigInt::from(a), BigInt::from(b))
    }

    fn poisson(text: &str) -> PoissonElement {
        parse_expr(text).unwrap().to_poisson(1).unwrap()
    }

    fn words(items: &[(&str, Coeff)]) -> AssocElement {
        let mut a = AssocElement::default();
        for (w, c) in items {
            a.add(w.bytes().map(|b| b - b'0').collect(), c.clone());
        }
        a
    }

    #[test]
    fn small_values() {
        assert_eq!(pbw(&poisson("[1,2]")).unwrap(), words(&[("12", q(1, 1)), ("21", q(-1, 1))]));
        assert_eq!(pbw(&poisson("1^2")).unwrap(), words(&[("12", q(1, 2)), ("21", q(1, 2))]));
        let h = q(1, 2);
        let expected = words(&[("123", h.clone()), ("132", -h.clone()), ("231", h.clone()), ("321", -h)]);
        assert_eq!(pbw(&poisson("1^[2,3]")).unwrap(), expected);
        assert!(pbw(&poisson("1^2").scaled(&q(1, 1))).is_ok());
        assert!(pbw(&parse_expr("[1,2]").unwrap().to_poisson(2).unwrap()).is_err());
    }

    #[test]
    fn pbw_is_an_isomorphism() {
        for n in 1..6 {
            let f = Filtration::new(n);
            let dims = f.dims();
            assert_eq!(*dims.last().unwrap(), (1..=n).product::<usize>());
            let profile: Vec<usize> = super::super::dual_hodge_profile(n).values().scan(0, |s, d| {
                *s += d;
                Some(*s)
            }).collect();
            assert_eq!(dims, profile);
        }
    }

    #[test]
    fn t12_respects_the_filtration() {
        for n in 2..5 {
            let r = filtration_check(n);
            assert!(r.passed(), "{:?}", r.failures);
        }
    }

    #[test]
    fn associated_graded_t12_is_the_poisson_one() {
        for n in 2..5 {
            let filt = Filtration::new(n);
            for f in forest_basis(n) {
                let x = PoissonElement::from_forest(1, f.clone());
                let mut diff = t12_assoc(&pbw(&x).unwrap());
                diff.add_scaled(&pbw(&t12(&x).unwrap()).unwrap(), &-Coeff::one());
                assert!(filt.contains(f.dual_hodge() as usize, &diff), "{f}");
            }
        }
    }

    fn shift(a: &AssocElement, by: u8) -> AssocElement {
        let mut out = AssocElement::default();
        for (w, c) in a.terms() {
            out.add(w.iter().map(|l| l + by).collect(), c.clone());
        }
        out
    }

    fn shifted_text(y: &Forest, by: u8) -> String {
        let mut out = String::new();
        let mut num = String::new();
        for ch in y.to_string().chars().chain(std::iter::once(' ')) {
            if ch.is_ascii_digit() {
                num.push(ch);
                continue;
            }
            if !num.is_empty() {
                out.push_str(&(num.parse::<u8>().unwrap() + by).to_string());
                num.clear();
            }
            if ch != ' ' {
                out.push(ch);
            }
        }
        out
    }

    #[test]
    fn associated_graded_products() {
        // in gr e1, concatenation is the commutative product and the commutator the bracket
        for (a, b) in [(1, 1), (1, 2), (2, 2), (1, 3), (2, 1)] {
            let filt = Filtration::new(a + b);
            for x in forest_basis(a) {
                for y in forest_basis(b) {
                    let px = pbw(&PoissonElement::from_forest(1, x.clone())).unwrap();
                    let py = shift(&pbw(&PoissonElement::from_forest(1, y.clone())).unwrap(), a as u8);
                    let (hx, hy) = (x.dual_hodge() as usize, y.dual_hodge() as usize);
                    let prod = pbw(&poisson(&format!("{x}^{}", shifted_text(&y, a as u8)))).unwrap();
                    let mut d = px.concat(&py);
                    d.add_scaled(&prod, &-Coeff::one());
                    assert!(filt.contains(hx + hy, &d), "{x} * {y}");
                    let xy = poisson_bracket(&PoissonElement::from_forest(1, x.clone()), &PoissonElement::from_forest(1, y.clone())).unwrap();
                    let mut c = px.concat(&py);
                    c.add_scaled(&py.concat(&px), &-Coeff::one());
                    c.add_scaled(&pbw(&xy).unwrap(), &-Coeff::one());
                    if hx + hy > 0 {
                        assert!(filt.contains(hx + hy - 1, &c), "[{x}, {y}]");
                    } else {
                        assert!(c.is_zero());
                    }
                }
            }
        }
    }
}
