//! Sparse matrices over the rationals and their ranks.

use super::HomologyError;
use crate::graph::Coeff;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use std::collections::BTreeMap;

/// Row-major sparse matrix; each row is stored scaled to coprime integers.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
    entries: Vec<Vec<(usize, Coeff)>>,
}

fn integer_row(row: &[(usize, Coeff)]) -> Vec<(usize, BigInt)> {
    let mut l = BigInt::one();
    for (_, c) in row {
        l = l.lcm(c.denom());
    }
    let mut v: Vec<(usize, BigInt)> = row.iter().map(|(j, c)| (*j, c.numer() * (&l / c.denom()))).collect();
    normalize(&mut v);
    v
}

fn normalize(v: &mut [(usize, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, x) in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, x) in v.iter_mut() {
            *x /= &g;
        }
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows], entries: vec![Vec::new(); rows] }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions add up.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Coeff)>) -> Result<Self, HomologyError> {
        let mut acc: Vec<Vec<(usize, Coeff)>> = vec![Vec::new(); rows];
        for (i, j, c) in triplets {
            if i >= rows || j >= cols {
                return Err(HomologyError::Shape(format!("entry ({i}, {j}) outside {rows}x{cols}")));
            }
            acc[i].push((j, c));
        }
        let mut m = SparseMatrix::zeros(rows, cols);
        for (i, mut row) in acc.into_iter().enumerate() {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, Coeff)> = Vec::with_capacity(row.len());
            for (j, c) in row {
                match merged.last_mut() {
                    Some((lj, lc)) if *lj == j => *lc += c,
                    _ => merged.push((j, c)),
                }
            }
            merged.retain(|(_, c)| !c.is_zero());
            m.data[i] = integer_row(&merged);
            m.entries[i] = merged;
        }
        Ok(m)
    }

    pub fn from_dense(rows: &[Vec<Coeff>]) -> Result<Self, HomologyError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(HomologyError::Shape("ragged dense matrix".into()));
        }
        let trip = rows.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, x)| (i, j, x.clone())));
        SparseMatrix::from_triplets(r, c, trip)
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Coeff {
        self.entries[i].iter().find(|e| e.0 == j).map(|e| e.1.clone()).unwrap_or_else(Coeff::zero)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Coeff)> {
        self.entries.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(j, c)| (i, *j, c)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(self.cols, self.rows, self.triplets().map(|(i, j, c)| (j, i, c.clone()))).expect("shape preserved")
    }

    /// Exact product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix, HomologyError> {
        if self.cols != other.rows {
            return Err(HomologyError::Shape(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut trip = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &other.entries[*k] {
                    trip.push((i, *j, a * b));
                }
            }
        }
        SparseMatrix::from_triplets(self.rows, other.cols, trip)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    /// Triplet text: a header line, then `(row, col, num/den)` per entry.
    pub fn to_triplet_text(&self, row_basis: &str, col_basis: &str) -> String {
        let mut s = format!("# rows {} {} cols {} {}\n", self.rows, row_basis, self.cols, col_basis);
        for (i, j, c) in self.triplets() {
            s.push_str(&format!("({}, {}, {}/{})\n", i, j, c.numer(), c.denom()));
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<SparseMatrix, HomologyError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| HomologyError::Parse("empty matrix file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 7 || parts[0] != "#" || parts[1] != "rows" || parts[4] != "cols" {
            return Err(HomologyError::Parse(format!("bad header: {header}")));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| HomologyError::Parse(format!("bad dimension {s}")));
        let (rows, cols) = (num(parts[2])?, num(parts[5])?);
        let mut trip = Vec::new();
        for (ln, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || HomologyError::Parse(format!("line {}: {line}", ln + 2));
            let inner = line.strip_prefix('(').and_then(|l| l.strip_suffix(')')).ok_or_else(bad)?;
            let f: Vec<&str> = inner.split(',').map(str::trim).collect();
            if f.len() != 3 {
                return Err(bad());
            }
            let i: usize = f[0].parse().map_err(|_| bad())?;
            let j: usize = f[1].parse().map_err(|_| bad())?;
            let c: Coeff = f[2].parse().map_err(|_| bad())?;
            trip.push((i, j, c));
        }
        SparseMatrix::from_triplets(rows, cols, trip)
    }

    /// Exact rank by fraction-free sparse elimination with Markowitz pivoting.
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<(usize, BigInt)>> = self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        exact_rank(rows, self.cols)
    }

    /// Rank modulo `p` together with the pivot rows and columns used.
    pub fn rank_mod(&self, p: u64) -> (usize, Vec<usize>, Vec<usize>) {
        let rows: Vec<(usize, Vec<(usize, u64)>)> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let v: Vec<(usize, u64)> = r.iter().map(|(j, x)| (*j, reduce(x, p))).filter(|e| e.1 != 0).collect();
                (i, v)
            })
            .filter(|(_, v)| !v.is_empty())
            .collect();
        modp_rank(rows, self.cols, p)
    }

    /// Rank from several random primes, confirmed by an exact rank of the pivot skeleton.
    ///
    /// Falls back to exact elimination if the primes disagree or the skeleton is singular.
    pub fn rank_fast(&self, seed: u64, primes: usize) -> usize {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut results = Vec::new();
        for _ in 0..primes.max(1) {
            let p = random_prime(&mut rng);
            results.push(self.rank_mod(p));
        }
        let r0 = results[0].0;
        if results.iter().any(|r| r.0 != r0) {
            return self.rank();
        }
        let (_, prow, pcol) = &results[0];
        let colset: FxHashSet<usize> = pcol.iter().copied().collect();
        let remap: rustc_hash::FxHashMap<usize, usize> = pcol.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let sub: Vec<Vec<(usize, BigInt)>> = prow
            .iter()
            .map(|&i| self.data[i].iter().filter(|(j, _)| colset.contains(j)).map(|(j, x)| (remap[j], x.clone())).collect())
            .collect();
        if exact_rank(sub, r0) == r0 {
            r0
        } else {
            self.rank()
        }
    }
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn random_prime(rng: &mut impl Rng) -> u64 {
    loop {
        let c = rng.random_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

/// Pivot choice: sparsest live row, then its entry in the sparsest column.
fn exact_rank(mut rows: Vec<Vec<(usize, BigInt)>>, cols: usize) -> usize {
    let mut col_rows: Vec<FxHashSet<usize>> = vec![FxHashSet::default(); cols];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            col_rows[*j].insert(i);
        }
    }
    let mut live: FxHashSet<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let mut rank = 0;
    while !live.is_empty() {
        let pi = *live.iter().min_by_key(|&&i| (rows[i].len(), i)).unwrap();
        live.remove(&pi);
        let prow = std::mem::take(&mut rows[pi]);
        if prow.is_empty() {
            continue;
        }
        let (pj, pv) = prow
            .iter()
            .min_by_key(|(j, x)| (col_rows[*j].len(), x.bits(), *j))
            .map(|(j, x)| (*j, x.clone()))
            .unwrap();
        rank += 1;
        for (j, _) in &prow {
            col_rows[*j].remove(&pi);
        }
        let targets: Vec<usize> = col_rows[pj].iter().copied().collect();
        for t in targets {
            let old = std::mem::take(&mut rows[t]);
            let tv = old.iter().find(|e| e.0 == pj).map(|e| e.1.clone()).unwrap();
            let g = pv.gcd(&tv);
            let (a, b) = (&pv / &g, &tv / &g);
            // new = a*old - b*prow
            let mut new = Vec::with_capacity(old.len() + prow.len());
            let (mut x, mut y) = (0, 0);
            while x < old.len() || y < prow.len() {
                let jo = old.get(x).map(|e| e.0);
                let jp = prow.get(y).map(|e| e.0);
                match (jo, jp) {
                    (Some(c), Some(d)) if c == d => {
                        let v = &a * &old[x].1 - &b * &prow[y].1;
                        if !v.is_zero() {
                            new.push((c, v));
                        }
                        x += 1;
                        y += 1;
                    }
                    (Some(c), Some(d)) if c < d => {
                        new.push((c, &a * &old[x].1));
                        x += 1;
                    }
                    (Some(c), None) => {
                        new.push((c, &a * &old[x].1));
                        x += 1;
                    }
                    (_, Some(d)) => {
                        new.push((d, -(&b * &prow[y].1)));
                        y += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            for (j, _) in &old {
                col_rows[*j].remove(&t);
            }
            normalize(&mut new);
            for (j, _) in &new {
                col_rows[*j].insert(t);
            }
            if new.is_empty() {
                live.remove(&t);
            }
            rows[t] = new;
        }
    }
    rank
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn modp_rank(rows: Vec<(usize, Vec<(usize, u64)>)>, cols: usize, p: u64) -> (usize, Vec<usize>, Vec<usize>) {
    let orig: Vec<usize> = rows.iter().map(|r| r.0).collect();
    let mut rows: Vec<Vec<(usize, u64)>> = rows.into_iter().map(|r| r.1).collect();
    let mut col_rows: Vec<FxHashSet<usize>> = vec![FxHashSet::default(); cols];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            col_rows[*j].insert(i);
        }
    }
    let mut live: FxHashSet<usize> = (0..rows.len()).collect();
    let (mut prows, mut pcols) = (Vec::new(), Vec::new());
    while !live.is_empty() {
        let pi = *live.iter().min_by_key(|&&i| (rows[i].len(), i)).unwrap();
        live.remove(&pi);
        let prow = std::mem::take(&mut rows[pi]);
        if prow.is_empty() {
            continue;
        }
        let (pj, pv) = *prow.iter().min_by_key(|(j, _)| (col_rows[*j].len(), *j)).unwrap();
        prows.push(orig[pi]);
        pcols.push(pj);
        for (j, _) in &prow {
            col_rows[*j].remove(&pi);
        }
        let pinv = inv_mod(pv, p);
        let targets: Vec<usize> = col_rows[pj].iter().copied().collect();
        for t in targets {
            let old = std::mem::take(&mut rows[t]);
            let tv = old.iter().find(|e| e.0 == pj).unwrap().1;
            let f = mul_mod(tv, pinv, p);
            let mut acc: std::collections::BTreeMap<usize, u64> = old.iter().copied().collect();
            for (j, x) in &prow {
                let e = acc.entry(*j).or_insert(0);
                *e = (*e + p - mul_mod(f, *x, p)) % p;
            }
            for (j, _) in &old {
                col_rows[*j].remove(&t);
            }
            let new: Vec<(usize, u64)> = acc.into_iter().filter(|e| e.1 != 0).collect();
            for (j, _) in &new {
                col_rows[*j].insert(t);
            }
            if new.is_empty() {
                live.remove(&t);
            }
            rows[t] = new;
        }
    }
    (prows.len(), prows, pcols)
}

impl SparseMatrix {
    /// An exact solution of `self * x = b` with free variables set to zero, or `None`.
    pub fn solve(&self, b: &[Coeff]) -> Result<Option<Vec<Coeff>>, HomologyError> {
        if b.len() != self.rows {
            return Err(HomologyError::Shape(format!("right-hand side has length {}, expected {}", b.len(), self.rows)));
        }
        let rhs = self.cols;
        // rows in insertion order, each reduced against the pivots present before it
        let mut pivots: Vec<(usize, BTreeMap<usize, Coeff>)> = Vec::new();
        let mut pivot_of: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, row) in self.entries.iter().enumerate() {
            let mut r: BTreeMap<usize, Coeff> = row.iter().cloned().collect();
            if !b[i].is_zero() {
                r.insert(rhs, b[i].clone());
            }
            while let Some((c, p)) = r.keys().find_map(|c| pivot_of.get(c).map(|&p| (*c, p))) {
                let f = r[&c].clone() / &pivots[p].1[&c];
                for (k, v) in &pivots[p].1 {
                    let e = r.entry(*k).or_insert_with(Coeff::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        r.remove(k);
                    }
                }
            }
            match r.keys().next() {
                None => {}
                Some(&c) if c == rhs => return Ok(None),
                Some(_) => {
                    let c = *r.keys().filter(|&&c| c < rhs).min_by_key(|&&c| (self_col_weight(&r[&c]), c)).expect("row has a variable");
                    pivot_of.insert(c, pivots.len());
                    pivots.push((c, r));
                }
            }
        }
        let mut x = vec![Coeff::zero(); self.cols];
        for (c, r) in pivots.iter().rev() {
            let mut acc = r.get(&rhs).cloned().unwrap_or_else(Coeff::zero);
            for (k, v) in r.range(..rhs) {
                if k != c {
                    acc -= v * &x[*k];
                }
            }
            x[*c] = acc / &r[c];
        }
        Ok(Some(x))
    }
}

fn self_col_weight(c: &Coeff) -> usize {
    (c.numer().bits() + c.denom().bits()) as usize
}

/// Plain dense Gaussian elimination over the rationals, used as an oracle.
pub fn dense_rank(m: &[Vec<Coeff>]) -> usize {
    let mut a: Vec<Vec<Coeff>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for k in c..cols {
                    let v = &f * &a[rank][k];
                    a[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}
