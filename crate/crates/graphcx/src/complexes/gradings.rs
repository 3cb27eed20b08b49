//! Loop order, Hodge and total-excess gradings.

use super::hairy::{bracket, cup};
use super::{differential, enumerate, ComplexError, ComplexSpec, HairBound, Window};
use crate::graph::{ChainVector, Coeff, Graph};
use num_bigint::BigInt;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// First Betti number `E - V + #components` of the underlying graph.
pub fn loop_order(g: &Graph) -> i64 {
    g.loop_order()
}

/// Hodge degree of a hairy chain: hairs minus one, if all terms agree.
pub fn hodge(x: &ChainVector) -> Option<i64> {
    super::hair_count(x).map(|h| h as i64 - 1)
}

/// `-h + E - k` for a graph paired with a Poisson factor of dual Hodge degree `h`.
pub fn total_excess(dual_hodge: i64, g: &Graph) -> i64 {
    -dual_hodge + g.num_edges() as i64 - g.num_internal() as i64
}

/// Total excess of a hairy graph, whose Poisson factor is the product of its hairs.
pub fn hairy_excess(g: &Graph) -> i64 {
    total_excess(g.num_external() as i64 - 1, g)
}

/// Common total excess of all terms, or `None` for zero or mixed chains.
pub fn excess_of(x: &ChainVector) -> Option<i64> {
    let mut out = None;
    for (g, _) in x.iter() {
        let e = hairy_excess(g.graph());
        if out.is_some_and(|o| o != e) {
            return None;
        }
        out = Some(e);
    }
    out
}

fn is_excess_homogeneous(x: &ChainVector, expected: i64) -> bool {
    x.iter().all(|(g, _)| hairy_excess(g.graph()) == expected)
}

/// Outcome of the sampled compatibility check between excess and the hairy operations.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ExcessAudit {
    pub pairs: usize,
    pub pool: usize,
    pub differential_failures: usize,
    pub bracket_failures: usize,
    pub cup_failures: usize,
    pub nonzero_brackets: usize,
    pub nonzero_cups: usize,
    pub examples: Vec<String>,
}

impl ExcessAudit {
    pub fn passed(&self) -> bool {
        self.differential_failures + self.bracket_failures + self.cup_failures == 0
    }
}

/// Random homogeneous elements of a hairy complex with at most `max_vertices` vertices.
pub struct HomogeneousSampler {
    classes: Vec<Vec<ChainVector>>,
}

impl HomogeneousSampler {
    pub fn new(spec: &ComplexSpec, max_vertices: usize, max_loops: i64) -> Result<Self, ComplexError> {
        let mut classes: BTreeMap<(i64, i64), Vec<ChainVector>> = BTreeMap::new();
        for j in 0..=max_loops {
            let w = Window::loops(j).with_hairs(HairBound::AtMost(max_vertices - 1)).with_max_internal(max_vertices - 1);
            for (d, g) in enumerate(spec, &w)?.iter() {
                if g.graph().num_vertices() <= max_vertices {
                    let key = (d, hairy_excess(g.graph()));
                    classes.entry(key).or_default().push(ChainVector::from_graph(g.graph(), spec.symmetry())?);
                }
            }
        }
        Ok(HomogeneousSampler { classes: classes.into_values().collect() })
    }

    pub fn pool_size(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// A combination of up to three graphs sharing degree and excess.
    pub fn sample(&self, rng: &mut impl Rng) -> ChainVector {
        let class = self.classes.choose(rng).expect("sampler pool is empty");
        let mut x = class[0].scaled(&Coeff::from_integer(BigInt::from(0)));
        for _ in 0..rng.random_range(1..=3) {
            let g = class.choose(rng).expect("class is non-empty");
            let c = Coeff::from_integer(BigInt::from(rng.random_range(1..=5)));
            x.add_scaled(g, &c);
        }
        x
    }
}

/// Checks on `pairs` random homogeneous pairs that the differential preserves excess,
/// the bracket adds it and the cup product adds it and subtracts one.
pub fn excess_audit(spec: &ComplexSpec, max_vertices: usize, pairs: usize, seed: u64) -> Result<ExcessAudit, ComplexError> {
    let sampler = HomogeneousSampler::new(spec, max_vertices, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut audit = ExcessAudit { pool: sampler.pool_size(), ..ExcessAudit::default() };
    while audit.pairs < pairs {
        let (x, y) = (sampler.sample(&mut rng), sampler.sample(&mut rng));
        let (Some(gx), Some(gy)) = (excess_of(&x), excess_of(&y)) else { continue };
        audit.pairs += 1;
        if !is_excess_homogeneous(&differential(&x, spec)?, gx) {
            audit.differential_failures += 1;
            audit.examples.push(format!("differential of {}", x.to_text().trim()));
        }
        let b = bracket(&x, &y, spec)?;
        audit.nonzero_brackets += usize::from(!b.is_zero());
        if !is_excess_homogeneous(&b, gx + gy) {
            audit.bracket_failures += 1;
            audit.examples.push(format!("bracket of {} and {}", x.to_text().trim(), y.to_text().trim()));
        }
        let c = cup(&x, &y, spec)?;
        audit.nonzero_cups += usize::from(!c.is_zero());
        if !is_excess_homogeneous(&c, gx + gy - 1) {
            audit.cup_failures += 1;
            audit.examples.push(format!("cup of {} and {}", x.to_text().trim(), y.to_text().trim()));
        }
    }
    Ok(audit)
}
