//! Form-degree counting for configuration space integrals of graphs.

use super::{enumerate, ComplexError, ComplexSpec, Family, Window};
use serde::Serialize;

/// One connected graph of the audited window.
#[derive(Debug, Clone, Serialize)]
pub struct AuditRow {
    pub graph: String,
    pub externals: usize,
    pub loops: i64,
    pub edges: usize,
    pub internal: usize,
    pub form_degree: i64,
    pub dimension: i64,
    /// Form degree exceeds the fiber dimension, so the integral vanishes.
    pub vanishes: bool,
    pub lower_bound: i64,
    pub bound_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeAudit {
    pub n: i64,
    pub codim: i64,
    pub rows: Vec<AuditRow>,
}

impl DegreeAudit {
    pub fn all_vanish(&self) -> bool {
        self.rows.iter().all(|r| r.vanishes)
    }

    pub fn bounds_hold(&self) -> bool {
        self.rows.iter().all(|r| r.bound_holds)
    }

    pub fn find(&self, graph: &str) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.graph == graph)
    }
}

/// `(n+k-1)e - (n+k)v` for `e` edges and `v` internal vertices.
pub fn form_degree(n: i64, codim: i64, edges: usize, internal: usize) -> i64 {
    (n + codim - 1) * edges as i64 - (n + codim) * internal as i64
}

/// `n(r-1) - 1`.
pub fn fiber_dimension(n: i64, externals: usize) -> i64 {
    n * (externals as i64 - 1) - 1
}

/// `n(r-1) + (n-1)j + (k-2)(r+j-1) + 1`.
pub fn closed_form_bound(n: i64, codim: i64, externals: usize, loops: i64) -> i64 {
    let r = externals as i64;
    n * (r - 1) + (n - 1) * loops + (codim - 2) * (r + loops - 1) + 1
}

/// Audits every connected graph with at least one edge in `Graphs_n(r)`, `1 <= r <= r_max`, `0 <= j <= j_max`.
pub fn degree_audit(n: i64, codim: i64, r_max: usize, j_max: i64) -> Result<DegreeAudit, ComplexError> {
    let mut rows = Vec::new();
    for r in 1..=r_max {
        let spec = ComplexSpec::operadic(Family::Graphs, n, r)?;
        for j in 0..=j_max {
            for (_, g) in enumerate(&spec, &Window::loops(j).connected())?.iter() {
                let gr = g.graph();
                if gr.num_edges() == 0 {
                    continue;
                }
                let (e, v) = (gr.num_edges(), gr.num_internal());
                let form = form_degree(n, codim, e, v);
                let dimension = fiber_dimension(n, r);
                let lower_bound = closed_form_bound(n, codim, r, j);
                rows.push(AuditRow {
                    graph: g.encode(),
                    externals: r,
                    loops: j,
                    edges: e,
                    internal: v,
                    form_degree: form,
                    dimension,
                    vanishes: form > dimension,
                    lower_bound,
                    bound_holds: form >= lower_bound,
                });
            }
        }
    }
    Ok(DegreeAudit { n, codim, rows })
}
