//! Window enumeration by degree sequences and ordered edge realization.

use super::{ComplexError, ComplexSpec, Family, Window};
use crate::graph::{canonicalize, Canon, CanonicalGraph, Graph, Parity};
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use std::collections::BTreeMap;

/// Basis of a window, one sorted list per degree.
#[derive(Debug, Clone)]
pub struct BasisTable {
    spec: ComplexSpec,
    window: Window,
    by_degree: BTreeMap<i64, Vec<CanonicalGraph>>,
    index: FxHashMap<CanonicalGraph, (i64, usize)>,
}

impl BasisTable {
    pub fn from_graphs(spec: ComplexSpec, window: Window, graphs: impl IntoIterator<Item = (i64, CanonicalGraph)>) -> Self {
        let mut by_degree: BTreeMap<i64, Vec<(String, CanonicalGraph)>> = BTreeMap::new();
        for (d, g) in graphs {
            by_degree.entry(d).or_default().push((g.encode(), g));
        }
        let mut index = FxHashMap::default();
        let by_degree = by_degree
            .into_iter()
            .map(|(d, mut v)| {
                v.sort_by(|a, b| a.0.cmp(&b.0));
                v.dedup_by(|a, b| a.0 == b.0);
                let gs: Vec<CanonicalGraph> = v.into_iter().map(|(_, g)| g).collect();
                for (i, g) in gs.iter().enumerate() {
                    index.insert(g.clone(), (d, i));
                }
                (d, gs)
            })
            .collect();
        BasisTable { spec, window, by_degree, index }
    }

    pub fn spec(&self) -> &ComplexSpec {
        &self.spec
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn basis(&self, degree: i64) -> &[CanonicalGraph] {
        self.by_degree.get(&degree).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis(degree).len()
    }

    /// Degree and position of a basis element.
    pub fn locate(&self, g: &CanonicalGraph) -> Option<(i64, usize)> {
        self.index.get(g).copied()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &CanonicalGraph)> {
        self.by_degree.iter().flat_map(|(&d, v)| v.iter().map(move |g| (d, g)))
    }

    /// Restriction to graphs accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&CanonicalGraph) -> bool) -> BasisTable {
        let items: Vec<(i64, CanonicalGraph)> = self.iter().filter(|(_, g)| keep(g)).map(|(d, g)| (d, g.clone())).collect();
        BasisTable::from_graphs(self.spec, self.window, items)
    }
}

/// One degree-sequence job for the realizer.
#[derive(Debug, Clone)]
struct Job {
    num_external: usize,
    internal_degrees: Vec<u32>,
    /// hairs attached to each internal vertex; `None` means externals are free
    hairs: Option<Vec<u32>>,
    edges: usize,
}

struct Realizer<'a> {
    job: &'a Job,
    multi: bool,
    loops: bool,
    residual: Vec<u32>,
    remaining: usize,
    max_external_edges: usize,
    edges: Vec<(u8, u8)>,
}

impl Realizer<'_> {
    fn k(&self) -> usize {
        self.job.internal_degrees.len()
    }

    fn free_externals(&self) -> usize {
        if self.job.hairs.is_some() { 0 } else { self.job.num_external }
    }

    fn internal_id(&self, u: usize) -> u8 {
        (self.job.num_external + u) as u8
    }

    /// Target codes for vertex u: 0 = loop, 1.. = later internals, then free externals.
    fn target_count(&self, u: usize) -> usize {
        1 + (self.k() - u - 1) + self.free_externals()
    }

    fn run(&mut self, out: &mut dyn FnMut(&[(u8, u8)])) {
        self.vertex(0, 0, out);
    }

    fn vertex(&mut self, u: usize, from: usize, out: &mut dyn FnMut(&[(u8, u8)])) {
        if u == self.k() {
            self.finish(out);
            return;
        }
        if self.residual[u] == 0 {
            self.vertex(u + 1, 0, out);
            return;
        }
        let placed = self.edges.len();
        if placed + self.remaining.div_ceil(2) > self.job.edges
            || (self.job.hairs.is_none() && placed + self.remaining + self.max_external_edges < self.job.edges)
        {
            return;
        }
        if !self.can_fill(u, from) {
            return;
        }
        let later = self.k() - u - 1;
        for code in from..self.target_count(u) {
            let next = if self.multi { code } else { code + 1 };
            if code == 0 {
                if !self.loops || self.residual[u] < 2 {
                    continue;
                }
                let id = self.internal_id(u);
                self.residual[u] -= 2;
                self.remaining -= 2;
                self.edges.push((id, id));
                self.vertex(u, next, out);
                self.edges.pop();
                self.remaining += 2;
                self.residual[u] += 2;
            } else if code <= later {
                let w = u + code;
                if self.residual[w] == 0 {
                    continue;
                }
                self.residual[u] -= 1;
                self.residual[w] -= 1;
                self.remaining -= 2;
                self.edges.push((self.internal_id(u), self.internal_id(w)));
                self.vertex(u, next, out);
                self.edges.pop();
                self.remaining += 2;
                self.residual[w] += 1;
                self.residual[u] += 1;
            } else {
                let e = (code - later - 1) as u8;
                self.residual[u] -= 1;
                self.remaining -= 1;
                self.edges.push((self.internal_id(u), e));
                self.vertex(u, next, out);
                self.edges.pop();
                self.remaining += 1;
                self.residual[u] += 1;
            }
        }
    }

    fn can_fill(&self, u: usize, from: usize) -> bool {
        let later = self.k() - u - 1;
        let r = self.residual[u] as usize;
        let mut cap = 0usize;
        if from == 0 && self.loops {
            cap += if self.multi { r } else { 2 };
        }
        for code in from.max(1)..=later {
            let w = u + code;
            cap += if self.multi { self.residual[w] as usize } else { (self.residual[w] > 0) as usize };
        }
        let ext_from = from.max(later + 1) - later - 1;
        let ext = self.free_externals().saturating_sub(ext_from);
        if ext > 0 {
            cap += if self.multi { r } else { ext };
        }
        cap >= r
    }

    fn finish(&mut self, out: &mut dyn FnMut(&[(u8, u8)])) {
        let placed = self.edges.len();
        match &self.job.hairs {
            Some(hairs) => {
                let mut edges = self.edges.clone();
                let mut h = 0u8;
                for (u, &c) in hairs.iter().enumerate() {
                    for _ in 0..c {
                        edges.push((self.internal_id(u), h));
                        h += 1;
                    }
                }
                if edges.len() == self.job.edges {
                    out(&edges);
                }
            }
            None => {
                if placed > self.job.edges {
                    return;
                }
                let t = self.job.edges - placed;
                let n = self.job.num_external;
                let mut pairs = Vec::new();
                for a in 0..n {
                    for b in a..n {
                        if a != b || self.loops {
                            pairs.push((a as u8, b as u8));
                        }
                    }
                }
                let mut chosen = Vec::with_capacity(t);
                self.external_pairs(&pairs, 0, t, &mut chosen, out);
            }
        }
    }

    fn external_pairs(
        &mut self,
        pairs: &[(u8, u8)],
        from: usize,
        left: usize,
        chosen: &mut Vec<(u8, u8)>,
        out: &mut dyn FnMut(&[(u8, u8)]),
    ) {
        if left == 0 {
            let mut edges = self.edges.clone();
            edges.extend_from_slice(chosen);
            out(&edges);
            return;
        }
        for i in from..pairs.len() {
            chosen.push(pairs[i]);
            let next = if self.multi { i } else { i + 1 };
            self.external_pairs(pairs, next, left - 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Non-increasing sequences of length `k` with entries in `[lo, hi]` and sum in `[smin, smax]`.
fn degree_sequences(k: usize, lo: u32, hi: u32, smin: u32, smax: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, lo: u32, hi: u32, smin: u32, smax: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            if smin == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if (k as u32) * lo > smax {
            return;
        }
        let top = hi.min(smax - (k as u32 - 1) * lo);
        for d in (lo..=top).rev() {
            if (k as u32) * d < smin {
                break;
            }
            cur.push(d);
            rec(k - 1, lo, d, smin.saturating_sub(d), smax - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, lo, hi, smin, smax, &mut Vec::new(), &mut out);
    out
}

/// Hair vectors with entries `h_i <= d_i`, summing to `total`, non-increasing within runs of equal degree.
fn hair_vectors(degrees: &[u32], total: u32, need_core: bool) -> Vec<Vec<u32>> {
    fn rec(deg: &[u32], i: usize, left: u32, need_core: bool, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == deg.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut top = deg[i].min(left);
        if need_core && deg.len() > 1 {
            // a vertex of a connected graph with several internal vertices keeps a core edge
            top = top.min(deg[i] - 1);
        }
        if i > 0 && deg[i] == deg[i - 1] {
            top = top.min(cur[i - 1]);
        }
        for h in (0..=top).rev() {
            cur.push(h);
            rec(deg, i + 1, left - h, need_core, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, 0, total, need_core, &mut Vec::new(), &mut out);
    out
}

struct Plan {
    jobs: Vec<Job>,
}

fn refuse(msg: &str) -> ComplexError {
    ComplexError::Window(msg.to_string())
}

fn internal_range(spec: &ComplexSpec, w: &Window, bound: Option<i64>) -> Result<(usize, usize), ComplexError> {
    let lo = w.min_internal;
    let hi = match (w.max_internal, bound) {
        (Some(v), Some(b)) => v.min(b.max(0) as usize),
        (Some(v), None) => v,
        (None, Some(b)) => b.max(0) as usize,
        (None, None) => {
            return Err(refuse(&format!(
                "{} with bivalent vertices needs a bound on internal vertices",
                spec.family.name()
            )))
        }
    };
    Ok((lo, hi))
}

fn plan(spec: &ComplexSpec, w: &Window) -> Result<Plan, ComplexError> {
    let f = spec.family;
    let minval = f.min_valence().max(1) as u32;
    let trivalent = f.min_valence() >= 3;
    let mut jobs = Vec::new();
    if f.is_hairy() {
        let j = w.loop_order.ok_or_else(|| refuse("hairy windows need a loop order"))?;
        let hmax = w.hairs.max().ok_or_else(|| refuse("hairy windows need a hair bound"))?;
        for hairs in 1..=hmax {
            if !w.hairs.admits(hairs) {
                continue;
            }
            let bound = trivalent.then_some(2 * j + hairs as i64 - 2);
            let (klo, khi) = internal_range(spec, w, bound)?;
            for k in klo..=khi {
                // E - k - H + 1 = j
                let e = j + k as i64 + hairs as i64 - 1;
                if e < 0 {
                    continue;
                }
                let e = e as usize;
                if k == 0 {
                    if hairs == 2 && e == 1 {
                        jobs.push(Job { num_external: 2, internal_degrees: vec![], hairs: None, edges: 1 });
                    }
                    continue;
                }
                let total = (2 * e - hairs.min(2 * e)) as u32;
                if 2 * e < hairs {
                    continue;
                }
                for d in degree_sequences(k, minval, total, total, total) {
                    for h in hair_vectors(&d, hairs as u32, true) {
                        jobs.push(Job { num_external: hairs, internal_degrees: d.clone(), hairs: Some(h), edges: e });
                    }
                }
            }
        }
    } else if f.is_gc() {
        let j = w.loop_order.ok_or_else(|| refuse("graph complex windows need a loop order"))?;
        let bound = trivalent.then_some(2 * j - 2);
        let (klo, khi) = internal_range(spec, w, bound)?;
        for k in klo.max(1)..=khi {
            let e = j + k as i64 - 1;
            if e < 0 {
                continue;
            }
            let total = 2 * e as u32;
            for d in degree_sequences(k, minval, total, total, total) {
                jobs.push(Job { num_external: 0, internal_degrees: d, hairs: None, edges: e as usize });
            }
        }
    } else {
        let n_ext = spec.arity.unwrap_or(0);
        let (klo, khi) = if f == Family::Gra {
            (0, 0)
        } else {
            let bound = match w.loop_order {
                Some(j) if trivalent => Some(2 * j + n_ext as i64 - 2),
                _ => None,
            };
            internal_range(spec, w, bound)?
        };
        let max_components = if w.connected { 1 } else { n_ext.max(1) };
        for k in klo..=khi {
            let v = (n_ext + k) as i64;
            let mut edge_counts: Vec<usize> = match (w.loop_order, w.degree_range) {
                (Some(j), _) => (1..=max_components as i64).map(|c| j + v - c).filter(|&e| e >= 0).map(|e| e as usize).collect(),
                (None, Some((lo, hi))) if spec.n >= 2 => (lo..=hi)
                    .filter_map(|d| {
                        let num = d + spec.n * k as i64;
                        (num >= 0 && num % (spec.n - 1) == 0).then(|| (num / (spec.n - 1)) as usize)
                    })
                    .collect(),
                _ => return Err(refuse("operadic windows need a loop order or a degree range with n >= 2")),
            };
            edge_counts.sort_unstable();
            edge_counts.dedup();
            for e in edge_counts {
                let total = 2 * e as u32;
                for d in degree_sequences(k, minval, total, 0, total) {
                    jobs.push(Job { num_external: n_ext, internal_degrees: d, hairs: None, edges: e });
                }
            }
        }
    }
    Ok(Plan { jobs })
}

fn accept(spec: &ComplexSpec, w: &Window, g: &Graph) -> Option<i64> {
    spec.check_member(g, w.allow_tadpoles).ok()?;
    if w.connected && !g.is_connected() {
        return None;
    }
    if let Some(j) = w.loop_order {
        if loop_grading(spec, g) != j {
            return None;
        }
    }
    if g.num_internal() < w.min_internal || w.max_internal.is_some_and(|v| g.num_internal() > v) {
        return None;
    }
    if spec.family.is_hairy() && !w.hairs.admits(g.num_external()) {
        return None;
    }
    let d = spec.degree(g).ok()?;
    w.admits_degree(d).then_some(d)
}

/// Loop grading used by windows: first Betti number, or the hairy excess.
pub fn loop_grading(spec: &ComplexSpec, g: &Graph) -> i64 {
    if spec.family.is_hairy() {
        g.num_edges() as i64 - g.num_internal() as i64 - g.num_external() as i64 + 1
    } else {
        g.loop_order()
    }
}

/// Enumerates the canonical non-zero graphs of a finite window.
/// Refuses windows that do not bound the number of graphs.
pub fn check_window(spec: &ComplexSpec, window: &Window) -> Result<(), ComplexError> {
    plan(spec, window).map(|_| ())
}

pub fn enumerate(spec: &ComplexSpec, window: &Window) -> Result<BasisTable, ComplexError> {
    let plan = plan(spec, window)?;
    let sym = spec.symmetry();
    let multi = spec.parity() == Parity::Odd;
    let loops = window.allow_tadpoles || spec.family.allows_loops();
    let found: Vec<FxHashSet<(i64, CanonicalGraph)>> = plan
        .jobs
        .par_iter()
        .map(|job| {
            let mut seen = FxHashSet::default();
            let residual: Vec<u32> = job
                .internal_degrees
                .iter()
                .zip(job.hairs.iter().flatten().chain(std::iter::repeat(&0)))
                .map(|(d, h)| d - h)
                .collect();
            let n = job.num_external;
            let max_external_edges = if multi { usize::MAX / 4 } else { n * n.saturating_sub(1) / 2 + if loops { n } else { 0 } };
            let mut r = Realizer {
                job,
                multi,
                loops,
                remaining: residual.iter().map(|&x| x as usize).sum(),
                residual,
                max_external_edges,
                edges: Vec::new(),
            };
            let k = job.internal_degrees.len();
            r.run(&mut |edges| {
                let g = Graph::raw(job.num_external, k, edges.to_vec());
                if let Some(d) = accept(spec, window, &g) {
                    if let Ok(Canon::Graph(cg, _)) = canonicalize(&g, sym) {
                        seen.insert((d, cg));
                    }
                }
            });
            seen
        })
        .collect();
    let mut all = FxHashSet::default();
    for s in found {
        all.extend(s);
    }
    Ok(BasisTable::from_graphs(*spec, *window, all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::HairBound;

    #[test]
    fn graphs_two_arity_two_forests() {
        let s = ComplexSpec::operadic(Family::Graphs, 2, 2).unwrap();
        let b = enumerate(&s, &Window::loops(0).with_max_internal(0)).unwrap();
        assert_eq!(b.dim(0), 1);
        assert_eq!(b.dim(1), 1);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn five_loop_in_bivalent_complex() {
        let s = ComplexSpec::graph_complex(Family::GC2, 2).unwrap();
        let b = enumerate(&s, &Window::loops(1).with_internal_exactly(5)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.iter().next().unwrap().1.graph().num_edges(), 5);
    }

    #[test]
    fn tripod_is_the_only_three_hair_tree() {
        let s = ComplexSpec::hairy(Family::HGC, 1, 2).unwrap();
        let w = Window::loops(0).with_hairs(HairBound::Exactly(3)).with_max_internal(1);
        let b = enumerate(&s, &w).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.iter().next().unwrap().1.graph().num_internal(), 1);
    }

    #[test]
    fn unbounded_windows_are_refused() {
        let s = ComplexSpec::graph_complex(Family::GC2, 2).unwrap();
        assert!(matches!(enumerate(&s, &Window::loops(1)), Err(ComplexError::Window(_))));
        let h = ComplexSpec::hairy(Family::HGC, 1, 2).unwrap();
        assert!(enumerate(&h, &Window::loops(0)).is_err());
    }

    #[test]
    fn degree_sequences_are_bounded() {
        let v = degree_sequences(2, 3, 6, 6, 6);
        assert_eq!(v, vec![vec![3, 3]]);
        assert_eq!(degree_sequences(3, 1, 4, 0, 4).len(), 2);
    }
}
