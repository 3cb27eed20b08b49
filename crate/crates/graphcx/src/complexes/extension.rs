//! Completing a leading term to a cocycle of a twisted hairy complex.

use super::gradings::excess_of;
use super::{enumerate, hair_count, ComplexError, HairBound, Twisted, Window};
use crate::graph::{CanonicalGraph, ChainVector};
use crate::homology::SparseMatrix;
use rustc_hash::FxHashMap;

/// Result of [`solve_cocycle_extension`].
#[derive(Debug, Clone, PartialEq)]
pub enum Extension {
    /// `leading + correction`, closed under the twisted differential through `h_max` hairs.
    Solved { cocycle: ChainVector, correction: ChainVector, unknowns: usize },
    /// No correction supported in higher hair counts closes the leading term.
    Inconsistent { unknowns: usize },
}

impl Extension {
    pub fn is_solved(&self) -> bool {
        matches!(self, Extension::Solved { .. })
    }
}

/// Solves `D(leading + c) = 0` for `c` supported in hair counts above those of `leading`
/// and at most `h_max`, in the same degree and total excess.
pub fn solve_cocycle_extension(leading: &ChainVector, tw: &Twisted, h_max: usize) -> Result<Extension, ComplexError> {
    let spec = tw.spec();
    let h0 = hair_count(leading).ok_or_else(|| ComplexError::Domain("leading term must be nonzero with a single hair count".into()))?;
    let excess = excess_of(leading).ok_or_else(|| ComplexError::Domain("leading term is not excess-homogeneous".into()))?;
    let (g0, _) = leading.iter().next().expect("leading term is nonzero");
    let degree = spec.degree(g0.graph())?;
    if h_max > tw.h_max() {
        return Err(ComplexError::Domain(format!("h_max {h_max} exceeds the twist's range {}", tw.h_max())));
    }
    let mut window = Window::loops(excess).with_hairs(HairBound::AtMost(h_max)).with_degrees(degree, degree);
    window.allow_tadpoles = tw.allows_tadpoles();
    let unknowns: Vec<CanonicalGraph> =
        enumerate(spec, &window)?.iter().filter(|(_, g)| g.graph().num_external() > h0).map(|(_, g)| g.clone()).collect();
    let mut rows: FxHashMap<CanonicalGraph, usize> = FxHashMap::default();
    let mut triplets = Vec::new();
    let mut row_of = |g: &CanonicalGraph| {
        let next = rows.len();
        *rows.entry(g.clone()).or_insert(next)
    };
    for (j, u) in unknowns.iter().enumerate() {
        let d = tw.differential(&ChainVector::from_graph(u.graph(), spec.symmetry())?)?;
        for (g, c) in d.sorted_terms().into_iter().map(|(_, g, c)| (g, c)) {
            triplets.push((row_of(g), j, c.clone()));
        }
    }
    let target = tw.differential(leading)?;
    let rhs_terms: Vec<(usize, _)> = target.sorted_terms().into_iter().map(|(_, g, c)| (row_of(g), -c.clone())).collect();
    let m = SparseMatrix::from_triplets(rows.len(), unknowns.len(), triplets).map_err(|e| ComplexError::Domain(e.to_string()))?;
    let mut b = vec![crate::graph::Coeff::from_integer(0.into()); rows.len()];
    for (i, c) in rhs_terms {
        b[i] = c;
    }
    let solution = m.solve(&b).map_err(|e| ComplexError::Domain(e.to_string()))?;
    let Some(x) = solution else { return Ok(Extension::Inconsistent { unknowns: unknowns.len() }) };
    let mut correction = ChainVector::new(spec.symmetry());
    for (u, c) in unknowns.iter().zip(x) {
        correction.add_canonical(u.clone(), c);
    }
    let mut cocycle = leading.clone();
    cocycle.add_assign(&correction);
    Ok(Extension::Solved { cocycle, correction, unknowns: unknowns.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{corona, tripod_series, ComplexSpec, MaurerCartan};
    use crate::graph::{decode, Coeff};
    use num_bigint::BigInt;

    fn twisted(h_max: usize) -> Twisted {
        Twisted::new(MaurerCartan::alpha(2, h_max).unwrap()).unwrap().with_tadpoles(true)
    }

    fn single(text: &str, spec: &ComplexSpec) -> ChainVector {
        ChainVector::from_graph(&decode(text).unwrap(), spec.symmetry()).unwrap()
    }

    #[test]
    fn hedgehog_extends() {
        let tw = twisted(7);
        let lead = single("N1 k1 | i1>i1 i1>1", tw.spec());
        assert!(!lead.is_zero());
        assert!(!tw.differential(&lead).unwrap().is_zero());
        let Extension::Solved { cocycle, correction, .. } = solve_cocycle_extension(&lead, &tw, 7).unwrap() else {
            panic!("hedgehog should extend")
        };
        assert!(!correction.is_zero());
        assert!(tw.differential(&cocycle).unwrap().is_zero());
    }

    #[test]
    fn tripod_recovers_the_series() {
        let tw = Twisted::new(MaurerCartan::alpha(2, 9).unwrap()).unwrap();
        let lead = ChainVector::from_graph(&corona(3), tw.spec().symmetry()).unwrap();
        let Extension::Solved { cocycle, .. } = solve_cocycle_extension(&lead, &tw, 9).unwrap() else { panic!() };
        // trees of degree -1 are coronas, so the solution is unique
        let expected = tripod_series(2, 9).unwrap().scaled(&Coeff::from_integer(BigInt::from(2)));
        assert_eq!(cocycle, expected);
    }

    #[test]
    fn wrong_leading_term_is_inconsistent() {
        let tw = twisted(7);
        let spec = *tw.spec();
        let lead = ChainVector::from_graph(&corona(4), spec.symmetry()).unwrap();
        assert!(!lead.is_zero());
        assert!(matches!(solve_cocycle_extension(&lead, &tw, 7).unwrap(), Extension::Inconsistent { .. }));
    }
}
