//! Maurer–Cartan elements of hairy complexes and twisted differentials.

use super::hairy::bracket_termwise;
use super::{differential_with, ComplexError, ComplexSpec, Family};
use crate::graph::{ChainVector, Coeff, Graph};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;

/// One internal vertex carrying `hairs` hairs.
pub fn corona(hairs: usize) -> Graph {
    Graph::from_ids(hairs, 1, (0..hairs).map(|i| (hairs as u8, i as u8)).collect()).expect("corona is well formed")
}

/// A hair-graded element, truncated above `h_max` hairs.
#[derive(Debug, Clone, PartialEq)]
pub struct MaurerCartan {
    spec: ComplexSpec,
    h_max: usize,
    components: BTreeMap<usize, ChainVector>,
}

impl MaurerCartan {
    /// `sum_k c_k * corona(2k+1)` for `2k+1 <= h_max`.
    pub fn coronas(spec: &ComplexSpec, h_max: usize, coeff: impl Fn(usize) -> Coeff) -> Result<Self, ComplexError> {
        if !spec.family.is_hairy() {
            return Err(ComplexError::Spec("Maurer-Cartan elements live in hairy complexes".into()));
        }
        let mut components = BTreeMap::new();
        let mut k = 1;
        while 2 * k + 1 <= h_max {
            let mut v = ChainVector::new(spec.symmetry());
            v.add_graph(&corona(2 * k + 1), &coeff(k))?;
            if !v.is_zero() {
                components.insert(2 * k + 1, v);
            }
            k += 1;
        }
        Ok(MaurerCartan { spec: *spec, h_max, components })
    }

    /// The element with coefficients `1/4^k` in `HGC_{n-1,n}`.
    pub fn alpha(n: i64, h_max: usize) -> Result<Self, ComplexError> {
        Self::geometric(n, h_max, Coeff::new(BigInt::one(), BigInt::from(4)))
    }

    /// Coefficients `ratio^k` in `HGC_{n-1,n}`.
    pub fn geometric(n: i64, h_max: usize, ratio: Coeff) -> Result<Self, ComplexError> {
        let spec = ComplexSpec::hairy(Family::HGC, n - 1, n)?;
        Self::coronas(&spec, h_max, |k| num_traits::pow(ratio.clone(), k))
    }

    pub fn zero(spec: &ComplexSpec, h_max: usize) -> Self {
        MaurerCartan { spec: *spec, h_max, components: BTreeMap::new() }
    }

    /// Builds from an arbitrary chain, grouping terms by hair count.
    pub fn from_chain(spec: &ComplexSpec, h_max: usize, x: &ChainVector) -> Result<Self, ComplexError> {
        let mut components: BTreeMap<usize, ChainVector> = BTreeMap::new();
        for (g, c) in x.iter() {
            spec.check_member(g.graph(), false)?;
            if spec.degree(g.graph())? != -1 {
                return Err(ComplexError::Domain(format!("{g} does not have degree -1")));
            }
            let h = g.graph().num_external();
            if h <= h_max {
                components.entry(h).or_insert_with(|| ChainVector::new(spec.symmetry())).add_canonical(g.clone(), c.clone());
            }
        }
        Ok(MaurerCartan { spec: *spec, h_max, components })
    }

    pub fn spec(&self) -> &ComplexSpec {
        &self.spec
    }

    pub fn h_max(&self) -> usize {
        self.h_max
    }

    pub fn component(&self, hairs: usize) -> Option<&ChainVector> {
        self.components.get(&hairs)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &ChainVector)> {
        self.components.iter().map(|(h, v)| (*h, v))
    }

    pub fn total(&self) -> ChainVector {
        let mut v = ChainVector::new(self.spec.symmetry());
        for c in self.components.values() {
            v.add_assign(c);
        }
        v
    }

    /// Residual `δα + ½[α,α]` split by hair count, up to `h_max`.
    pub fn residual(&self) -> Result<BTreeMap<usize, ChainVector>, ComplexError> {
        let a = self.total();
        let mut r = differential_with(&a, &self.spec, false)?;
        let b = bracket_termwise(&a, &a, &self.spec)?;
        r.add_scaled(&b, &Coeff::new(BigInt::one(), BigInt::from(2)));
        Ok(split_by_hairs(&r, self.h_max))
    }

    pub fn is_maurer_cartan(&self) -> Result<bool, ComplexError> {
        Ok(self.residual()?.values().all(ChainVector::is_zero))
    }
}

/// Terms grouped by hair count, keeping only counts `<= h_max`.
pub fn split_by_hairs(x: &ChainVector, h_max: usize) -> BTreeMap<usize, ChainVector> {
    let mut out: BTreeMap<usize, ChainVector> = BTreeMap::new();
    for (g, c) in x.iter() {
        let h = g.graph().num_external();
        if h <= h_max {
            out.entry(h).or_insert_with(|| ChainVector::new(x.symmetry())).add_canonical(g.clone(), c.clone());
        }
    }
    out
}

/// Drops terms with more than `h_max` hairs.
pub fn truncate_hairs(x: &ChainVector, h_max: usize) -> ChainVector {
    x.filtered(|g| g.graph().num_external() <= h_max)
}

/// A hairy complex twisted by a Maurer–Cartan element, computed modulo graphs with more than `h_max` hairs.
#[derive(Debug, Clone)]
pub struct Twisted {
    mc: MaurerCartan,
    allow_tadpoles: bool,
}

impl Twisted {
    /// Refuses elements whose Maurer–Cartan residual is nonzero in range.
    pub fn new(mc: MaurerCartan) -> Result<Self, ComplexError> {
        if !mc.is_maurer_cartan()? {
            return Err(ComplexError::Domain("element fails the Maurer-Cartan equation within its hair range".into()));
        }
        Ok(Twisted { mc, allow_tadpoles: false })
    }

    pub fn with_tadpoles(mut self, allow: bool) -> Self {
        self.allow_tadpoles = allow;
        self
    }

    pub fn spec(&self) -> &ComplexSpec {
        &self.mc.spec
    }

    pub fn allows_tadpoles(&self) -> bool {
        self.allow_tadpoles
    }

    pub fn h_max(&self) -> usize {
        self.mc.h_max
    }

    pub fn mc(&self) -> &MaurerCartan {
        &self.mc
    }

    /// `δx + [α, x]`, truncated to `h_max` hairs.
    pub fn differential(&self, x: &ChainVector) -> Result<ChainVector, ComplexError> {
        let spec = &self.mc.spec;
        let mut r = differential_with(x, spec, self.allow_tadpoles)?;
        let a = self.mc.total();
        let b = bracket_termwise(&a, &truncate_hairs(x, self.mc.h_max), spec)?;
        r.add_assign(&b);
        Ok(truncate_hairs(&r, self.mc.h_max))
    }
}

/// The scaling derivation: multiplies each graph by `#internal - #edges`.
pub fn scaling(x: &ChainVector) -> ChainVector {
    let mut out = ChainVector::new(x.symmetry());
    for (g, c) in x.iter() {
        let w = g.graph().num_internal() as i64 - g.graph().num_edges() as i64;
        out.add_canonical(g.clone(), c * Coeff::from_integer(BigInt::from(w)));
    }
    out
}

/// The tripod series `sum_k 2k/4^k corona(2k+1)`, equal to minus the scaling of the standard element.
pub fn tripod_series(n: i64, h_max: usize) -> Result<ChainVector, ComplexError> {
    let a = MaurerCartan::alpha(n, h_max)?;
    Ok(scaling(&a.total()).scaled(&-Coeff::one()))
}

#[cfg(test)]
pub(crate) fn coeff_of(x: &ChainVector, g: &Graph) -> Result<Coeff, ComplexError> {
    use num_traits::Zero;
    let probe = ChainVector::from_graph(g, x.symmetry())?;
    let c = match probe.iter().next() {
        Some((cg, s)) => x.coeff(cg) * s,
        None => Coeff::zero(),
    };
    Ok(c)
}
