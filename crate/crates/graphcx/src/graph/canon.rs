//! Canonical labeling by branch-and-bound over vertex orderings.
//!
//! The search orders the relabelable vertices (internals, plus externals when
//! they are unlabeled) so that a row-by-row key is minimal. Colour refinement
//! restricts the candidates at each depth and interchangeable twins are
//! placed in a fixed order. Every minimal leaf is an automorphism image of the
//! first one, so comparing their orientation signs detects vanishing graphs.

use super::{perm_sign, CanonicalGraph, ExternalMode, Graph, GraphError, Parity, Symmetry};
use std::collections::BTreeMap;

/// Result of canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Canon {
    Zero,
    Graph(CanonicalGraph, i8),
}

impl Canon {
    pub fn is_zero(&self) -> bool {
        matches!(self, Canon::Zero)
    }
}

/// Canonical representative and orientation sign, or `Zero` when an
/// automorphism reverses the orientation.
pub fn canonicalize(g: &Graph, sym: Symmetry) -> Result<Canon, GraphError> {
    validate(g)?;
    Ok(Canonizer::new(g, sym, true).run())
}

/// Canonical representative of the underlying isomorphism class, ignoring
/// orientations (used for degree counting over all graphs).
pub fn canonicalize_unsigned(g: &Graph, externals: ExternalMode) -> Result<CanonicalGraph, GraphError> {
    validate(g)?;
    let sym = Symmetry { parity: Parity::Even, externals };
    match Canonizer::new(g, sym, false).run() {
        Canon::Graph(c, _) => Ok(c),
        Canon::Zero => unreachable!("unsigned canonicalization never vanishes"),
    }
}

fn validate(g: &Graph) -> Result<(), GraphError> {
    let total = g.num_vertices();
    match g.edges().iter().find(|&&(a, b)| a as usize >= total || b as usize >= total) {
        Some(e) => Err(GraphError::Structural(format!("edge {e:?} references a missing vertex"))),
        None => Ok(()),
    }
}

struct Canonizer<'a> {
    g: &'a Graph,
    sym: Symmetry,
    signed: bool,
    /// Relabelable vertex ids, internals first.
    lab: Vec<u8>,
    color: Vec<u32>,
    loops: Vec<u32>,
    fixed_nb: Vec<Vec<u32>>,
    nbrs: Vec<Vec<(usize, u32)>>,
    twin_class: Vec<Option<usize>>,
    twin_members: Vec<Vec<usize>>,
    pos: Vec<Option<u32>>,
    order: Vec<usize>,
    cur: Vec<u32>,
    best: Option<Vec<u32>>,
    best_order: Vec<usize>,
    best_sign: i8,
    zero: bool,
}

const BACK_BASE: u32 = 1 << 20;

impl<'a> Canonizer<'a> {
    fn new(g: &'a Graph, sym: Symmetry, signed: bool) -> Self {
        let n = g.num_external();
        let mut lab: Vec<u8> = (n..g.num_vertices()).map(|v| v as u8).collect();
        if !sym.externals.is_labeled() {
            lab.extend((0..n).map(|v| v as u8));
        }
        let mut index = vec![usize::MAX; g.num_vertices()];
        for (i, &v) in lab.iter().enumerate() {
            index[v as usize] = i;
        }
        let nl = lab.len();
        let mut loops = vec![0u32; nl];
        let mut fixed_nb = vec![Vec::new(); nl];
        let mut nb_map: Vec<BTreeMap<usize, u32>> = vec![BTreeMap::new(); nl];
        for &(a, b) in g.edges() {
            let (ia, ib) = (index[a as usize], index[b as usize]);
            if a == b {
                if ia != usize::MAX {
                    loops[ia] += 1;
                }
                continue;
            }
            match (ia != usize::MAX, ib != usize::MAX) {
                (true, true) => {
                    *nb_map[ia].entry(ib).or_default() += 1;
                    *nb_map[ib].entry(ia).or_default() += 1;
                }
                (true, false) => fixed_nb[ia].push(b as u32),
                (false, true) => fixed_nb[ib].push(a as u32),
                (false, false) => {}
            }
        }
        for f in &mut fixed_nb {
            f.sort_unstable();
        }
        let nbrs: Vec<Vec<(usize, u32)>> = nb_map.into_iter().map(|m| m.into_iter().collect()).collect();
        let mut c = Canonizer {
            g,
            sym,
            signed,
            lab,
            color: vec![0; nl],
            loops,
            fixed_nb,
            nbrs,
            twin_class: vec![None; nl],
            twin_members: Vec::new(),
            pos: vec![None; nl],
            order: Vec::with_capacity(nl),
            cur: Vec::new(),
            best: None,
            best_order: Vec::new(),
            best_sign: 1,
            zero: false,
        };
        c.refine_colors();
        c.find_twins();
        c
    }

    fn kind(&self, i: usize) -> u32 {
        if (self.lab[i] as usize) < self.g.num_external() {
            1
        } else {
            0
        }
    }

    fn refine_colors(&mut self) {
        let nl = self.lab.len();
        let mut keys: Vec<Vec<u32>> = (0..nl)
            .map(|i| {
                let valence: u32 =
                    2 * self.loops[i] + self.fixed_nb[i].len() as u32 + self.nbrs[i].iter().map(|&(_, m)| m).sum::<u32>();
                let mut k = vec![self.kind(i), valence, self.loops[i], self.fixed_nb[i].len() as u32];
                k.extend_from_slice(&self.fixed_nb[i]);
                k
            })
            .collect();
        let mut classes = assign_ranks(&keys, &mut self.color);
        loop {
            keys = (0..nl)
                .map(|i| {
                    let mut nb: Vec<(u32, u32)> = self.nbrs[i].iter().map(|&(j, m)| (self.color[j], m)).collect();
                    nb.sort_unstable();
                    let mut k = vec![self.color[i]];
                    for (c, m) in nb {
                        k.push(c);
                        k.push(m);
                    }
                    k
                })
                .collect();
            let mut next = vec![0; nl];
            let count = assign_ranks(&keys, &mut next);
            self.color = next;
            if count == classes {
                break;
            }
            classes = count;
        }
    }

    fn find_twins(&mut self) {
        let nl = self.lab.len();
        let mut groups: BTreeMap<(u32, Vec<u32>, Vec<(usize, u32)>), Vec<usize>> = BTreeMap::new();
        for i in 0..nl {
            if self.loops[i] > 0 {
                continue;
            }
            groups.entry((self.color[i], self.fixed_nb[i].clone(), self.nbrs[i].clone())).or_default().push(i);
        }
        for (_, members) in groups {
            if members.len() < 2 {
                continue;
            }
            // identical open neighbourhoods already exclude adjacency between members
            if self.signed {
                let (u, v) = (self.lab[members[0]], self.lab[members[1]]);
                let mut perm: Vec<u8> = (0..self.g.num_vertices() as u8).collect();
                perm.swap(u as usize, v as usize);
                let identity: Vec<u8> = (0..self.g.num_vertices() as u8).collect();
                if self.orientation(&perm).1 != self.orientation(&identity).1 {
                    self.zero = true;
                    return;
                }
            }
            let id = self.twin_members.len();
            for &m in &members {
                self.twin_class[m] = Some(id);
            }
            self.twin_members.push(members);
        }
    }

    fn run(mut self) -> Canon {
        if self.signed && self.trivially_zero() {
            return Canon::Zero;
        }
        if self.zero {
            return Canon::Zero;
        }
        self.dfs();
        if self.zero {
            return Canon::Zero;
        }
        let perm = self.perm_for(&self.best_order.clone());
        let (graph, sign) = self.orientation(&perm);
        Canon::Graph(CanonicalGraph::from_canonical_graph(graph), if self.signed { sign } else { 1 })
    }

    fn trivially_zero(&self) -> bool {
        match self.sym.parity {
            Parity::Odd => self.g.has_loop(),
            Parity::Even => {
                let mut seen: Vec<(u8, u8)> =
                    self.g.edges().iter().map(|&(a, b)| if a <= b { (a, b) } else { (b, a) }).collect();
                seen.sort_unstable();
                seen.windows(2).any(|w| w[0] == w[1])
            }
        }
    }

    fn row(&self, i: usize) -> impl Iterator<Item = u32> + '_ {
        let mut back: Vec<u32> = Vec::new();
        for &(j, m) in &self.nbrs[i] {
            if let Some(p) = self.pos[j] {
                for _ in 0..m {
                    back.push(p);
                }
            }
        }
        back.sort_unstable();
        let head = [self.color[i], self.loops[i], self.fixed_nb[i].len() as u32];
        head.into_iter()
            .chain(self.fixed_nb[i].iter().copied())
            .chain(std::iter::once(BACK_BASE - back.len() as u32))
            .chain(back)
    }

    fn dfs(&mut self) {
        let depth = self.order.len();
        if depth == self.lab.len() {
            self.leaf();
            return;
        }
        let min_color = (0..self.lab.len()).filter(|&i| self.pos[i].is_none()).map(|i| self.color[i]).min().unwrap();
        let candidates: Vec<usize> = (0..self.lab.len())
            .filter(|&i| self.pos[i].is_none() && self.color[i] == min_color)
            .filter(|&i| match self.twin_class[i] {
                None => true,
                Some(c) => self.twin_members[c].iter().take_while(|&&m| m != i).all(|&m| self.pos[m].is_some()),
            })
            .collect();
        let mark = self.cur.len();
        for c in candidates {
            let row: Vec<u32> = self.row(c).collect();
            self.cur.extend_from_slice(&row);
            let pruned = match &self.best {
                Some(best) => {
                    let l = self.cur.len().min(best.len());
                    self.cur[..l] > best[..l]
                }
                None => false,
            };
            if !pruned {
                self.pos[c] = Some(depth as u32);
                self.order.push(c);
                self.dfs();
                self.order.pop();
                self.pos[c] = None;
            }
            self.cur.truncate(mark);
        }
    }

    fn leaf(&mut self) {
        let better = match &self.best {
            None => true,
            Some(best) => self.cur < *best,
        };
        if better {
            self.best = Some(self.cur.clone());
            self.best_order = self.order.clone();
            self.zero = false;
            if self.signed {
                let perm = self.perm_for(&self.order.clone());
                self.best_sign = self.orientation(&perm).1;
            }
        } else if self.signed && !self.zero && self.best.as_deref() == Some(&self.cur[..]) {
            let perm = self.perm_for(&self.order.clone());
            if self.orientation(&perm).1 != self.best_sign {
                self.zero = true;
            }
        }
    }

    /// Old id -> new id for a complete ordering of the relabelable vertices.
    fn perm_for(&self, order: &[usize]) -> Vec<u8> {
        let n = self.g.num_external();
        let k = self.g.num_internal();
        let mut perm: Vec<u8> = (0..self.g.num_vertices() as u8).collect();
        for (p, &i) in order.iter().enumerate() {
            let v = self.lab[i] as usize;
            perm[v] = if p < k { (n + p) as u8 } else { (p - k) as u8 };
        }
        perm
    }

    /// Relabels by `perm`, normalizes edge directions and order, and returns the
    /// sign relating the input orientation to the normalized one.
    fn orientation(&self, perm: &[u8]) -> (Graph, i8) {
        let n = self.g.num_external();
        let k = self.g.num_internal();
        let rank = |v: u8| -> usize {
            let v = v as usize;
            if v >= n {
                v - n
            } else {
                k + v
            }
        };
        let mut flips = 0usize;
        let mut mapped: Vec<(u8, u8)> = Vec::with_capacity(self.g.num_edges());
        for &(a, b) in self.g.edges() {
            let (pa, pb) = (perm[a as usize], perm[b as usize]);
            if rank(pa) > rank(pb) {
                flips += 1;
                mapped.push((pb, pa));
            } else {
                mapped.push((pa, pb));
            }
        }
        let mut idx: Vec<usize> = (0..mapped.len()).collect();
        idx.sort_by_key(|&i| (rank(mapped[i].0), rank(mapped[i].1)));
        let edges: Vec<(u8, u8)> = idx.iter().map(|&i| mapped[i]).collect();
        let mut sign = 1i8;
        match self.sym.parity {
            Parity::Even => sign *= perm_sign(&idx),
            Parity::Odd => {
                if flips % 2 == 1 {
                    sign = -sign;
                }
                let ip: Vec<usize> = (0..k).map(|i| perm[n + i] as usize - n).collect();
                sign *= perm_sign(&ip);
            }
        }
        if self.sym.externals == ExternalMode::Antisymmetric {
            let ep: Vec<usize> = (0..n).map(|i| perm[i] as usize).collect();
            sign *= perm_sign(&ep);
        }
        (Graph::raw(n, k, edges), sign)
    }
}

fn assign_ranks(keys: &[Vec<u32>], out: &mut [u32]) -> usize {
    let mut sorted: Vec<&Vec<u32>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    for (i, k) in keys.iter().enumerate() {
        out[i] = sorted.binary_search(&k).unwrap() as u32;
    }
    sorted.len()
}
