//! The `r`-loop graphs `L_r` in `GC²_n` and the residue of `r` mod 4 where they survive.

use super::{differential_with, ComplexError, ComplexSpec, Family};
use crate::graph::{ChainVector, Graph};
use serde::Serialize;

/// `r` internal vertices in a cycle, edges `i -> i+1`.
pub fn loop_graph(r: usize) -> Graph {
    let edges = (0..r).map(|i| (i as u8, ((i + 1) % r) as u8)).collect();
    Graph::from_ids(0, r, edges).expect("cycle is well formed")
}

/// The `r`-cycle with one hair on each vertex: cycle edges first, then hairs `i -> h`.
pub fn hedgehog(r: usize) -> Graph {
    let mut edges: Vec<(u8, u8)> = (0..r).map(|i| ((r + i) as u8, (r + (i + 1) % r) as u8)).collect();
    edges.extend((0..r).map(|i| ((r + i) as u8, i as u8)));
    Graph::from_ids(r, r, edges).expect("hedgehog is well formed")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopClassRow {
    pub r: usize,
    pub degree: i64,
    pub closed: bool,
    pub nonzero: bool,
}

/// Which of `r ≡ 2n-1` and `r ≡ 2n+1 (mod 4)` matches the nonzero loop graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Congruence {
    TwoNMinusOne,
    TwoNPlusOne,
    Neither,
}

impl Congruence {
    pub fn describe(self, n: i64) -> String {
        match self {
            Congruence::TwoNMinusOne => format!("nonzero exactly for r = 2n-1 = {} mod 4", (2 * n - 1).rem_euclid(4)),
            Congruence::TwoNPlusOne => format!("nonzero exactly for r = 2n+1 = {} mod 4", (2 * n + 1).rem_euclid(4)),
            Congruence::Neither => "nonzero set is not a single residue mod 4".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopClassReport {
    pub n: i64,
    pub rows: Vec<LoopClassRow>,
    pub supports: Congruence,
}

impl LoopClassReport {
    pub fn all_closed(&self) -> bool {
        self.rows.iter().all(|r| r.closed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,degree,closed,nonzero\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.r, r.degree, r.closed, r.nonzero));
        }
        out
    }
}

fn matches_residue(rows: &[LoopClassRow], residue: i64) -> bool {
    rows.iter().all(|row| row.nonzero == ((row.r as i64 - residue).rem_euclid(4) == 0))
}

pub fn loop_classes(n: i64, r_max: usize) -> Result<LoopClassReport, ComplexError> {
    let spec = ComplexSpec::graph_complex(Family::GC2, n)?;
    let mut rows = Vec::new();
    for r in 1..=r_max {
        let g = loop_graph(r);
        let x = ChainVector::from_graph(&g, spec.symmetry())?;
        let closed = differential_with(&x, &spec, r == 1)?.is_zero();
        rows.push(LoopClassRow { r, degree: spec.degree(&g)?, closed, nonzero: !x.is_zero() });
    }
    let supports = if matches_residue(&rows, 2 * n + 1) {
        Congruence::TwoNPlusOne
    } else if matches_residue(&rows, 2 * n - 1) {
        Congruence::TwoNMinusOne
    } else {
        Congruence::Neither
    };
    Ok(LoopClassReport { n, rows, supports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_loops() {
        let rep = loop_classes(2, 6).unwrap();
        let nonzero: Vec<usize> = rep.rows.iter().filter(|r| r.nonzero).map(|r| r.r).collect();
        assert_eq!(nonzero, vec![1, 5]);
        assert!(rep.all_closed());
        assert_eq!(rep.rows[4].degree, 2 - 5);
    }

    #[test]
    fn hedgehogs() {
        assert_eq!(crate::graph::encode(&hedgehog(1)), "N1 k1 | i1>i1 i1>1");
        assert_eq!(hedgehog(3).num_edges(), 6);
    }

    #[test]
    fn csv_header() {
        let rep = loop_classes(3, 3).unwrap();
        assert!(rep.to_csv().starts_with("r,degree,closed,nonzero\n1,"));
        assert_eq!(rep.rows.iter().filter(|r| r.nonzero).count(), 1);
    }
}
