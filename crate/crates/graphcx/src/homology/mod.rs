//! Boundary matrices, exact ranks and Betti numbers.

mod matrix;

pub use matrix::{dense_rank, SparseMatrix};

use crate::complexes::{differential_with, enumerate, BasisTable, ComplexError, ComplexSpec, Window};
use crate::graph::{CanonicalGraph, ChainVector, Coeff};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// How ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankMethod {
    #[default]
    Exact,
    /// Modular ranks with an exact skeleton check; seed and number of primes.
    Fast { seed: u64, primes: usize },
}

impl RankMethod {
    pub fn rank(self, m: &SparseMatrix) -> usize {
        match self {
            RankMethod::Exact => m.rank(),
            RankMethod::Fast { seed, primes } => m.rank_fast(seed, primes),
        }
    }
}

/// Matrix of `d` from degree `degree` to `degree - 1`; columns index the source basis.
pub fn boundary_matrix_with(
    basis: &BasisTable,
    degree: i64,
    d: impl Fn(&CanonicalGraph) -> Result<ChainVector, ComplexError> + Sync,
) -> Result<SparseMatrix, HomologyError> {
    let src = basis.basis(degree);
    let rows = basis.dim(degree - 1);
    let cols: Vec<Result<Vec<(usize, usize, Coeff)>, HomologyError>> = src
        .par_iter()
        .enumerate()
        .map(|(j, g)| {
            let img = d(g)?;
            let mut out = Vec::with_capacity(img.len());
            for (h, c) in img.iter() {
                match basis.locate(h) {
                    Some((dh, i)) if dh == degree - 1 => out.push((i, j, c.clone())),
                    Some((dh, _)) => {
                        return Err(HomologyError::Integrity(format!("{h} has degree {dh}, expected {}", degree - 1)))
                    }
                    None => return Err(HomologyError::Integrity(format!("differential of {g} leaves the window at {h}"))),
                }
            }
            Ok(out)
        })
        .collect();
    let mut trip = Vec::new();
    for c in cols {
        trip.extend(c?);
    }
    SparseMatrix::from_triplets(rows, src.len(), trip)
}

pub fn boundary_matrix(basis: &BasisTable, degree: i64) -> Result<SparseMatrix, HomologyError> {
    let spec = *basis.spec();
    let tad = basis.window().allow_tadpoles;
    boundary_matrix_with(basis, degree, |g| {
        differential_with(&ChainVector::from_graph(g.graph(), spec.symmetry())?, &spec, tad)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyRow {
    pub degree: i64,
    pub dim: usize,
    /// rank of the differential leaving this degree
    pub rank_out: usize,
    /// rank of the differential arriving in this degree
    pub rank_in: usize,
    pub betti: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub spec: ComplexSpec,
    pub window: Window,
    pub rows: Vec<HomologyRow>,
}

impl HomologyTable {
    pub fn betti(&self, degree: i64) -> usize {
        self.rows.iter().find(|r| r.degree == degree).map_or(0, |r| r.betti)
    }

    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.betti).sum()
    }

    pub fn euler_from_betti(&self) -> i64 {
        self.rows.iter().map(|r| sign(r.degree) * r.betti as i64).sum()
    }

    pub fn euler_from_dims(&self) -> i64 {
        self.rows.iter().map(|r| sign(r.degree) * r.dim as i64).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,dim,rank_out,rank_in,betti\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{},{},{}\n", r.degree, r.dim, r.rank_out, r.rank_in, r.betti));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("homology table serializes")
    }
}

fn sign(d: i64) -> i64 {
    if d.rem_euclid(2) == 0 { 1 } else { -1 }
}

/// Homology of an enumerated basis under a given differential.
pub fn homology_of(
    basis: &BasisTable,
    method: RankMethod,
    d: impl Fn(&CanonicalGraph) -> Result<ChainVector, ComplexError> + Sync,
) -> Result<HomologyTable, HomologyError> {
    let degrees: Vec<i64> = basis.degrees().collect();
    let ranks: BTreeMap<i64, usize> = degrees
        .par_iter()
        .map(|&deg| {
            let m = boundary_matrix_with(basis, deg, &d)?;
            Ok((deg, method.rank(&m)))
        })
        .collect::<Result<_, HomologyError>>()?;
    let rows = degrees
        .iter()
        .map(|&deg| {
            let dim = basis.dim(deg);
            let rank_out = ranks[&deg];
            let rank_in = ranks.get(&(deg + 1)).copied().unwrap_or(0);
            HomologyRow { degree: deg, dim, rank_out, rank_in, betti: dim - rank_out - rank_in }
        })
        .collect();
    Ok(HomologyTable { spec: *basis.spec(), window: *basis.window(), rows })
}

/// Enumerates a window and computes its homology under the untwisted differential.
pub fn homology(spec: &ComplexSpec, window: &Window, method: RankMethod) -> Result<HomologyTable, HomologyError> {
    let basis = enumerate(spec, window)?;
    let tad = window.allow_tadpoles;
    let spec = *spec;
    homology_of(&basis, method, |g| differential_with(&ChainVector::from_graph(g.graph(), spec.symmetry())?, &spec, tad))
}

/// Euler characteristic from basis sizes.
pub fn euler(basis: &BasisTable) -> i64 {
    basis.degrees().map(|d| sign(d) * basis.dim(d) as i64).sum()
}

/// True if `d(x)` vanishes.
pub fn cocycle_check(x: &ChainVector, d: impl Fn(&ChainVector) -> Result<ChainVector, ComplexError>) -> Result<bool, ComplexError> {
    Ok(d(x)?.is_zero())
}
