use super::ComplexError;
use crate::graph::{Graph, Parity, Symmetry};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Gra,
    Graphs,
    Graphs2,
    GC,
    GC2,
    HGC,
    HGC2,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        Some(match s.to_ascii_lowercase().as_str() {
            "gra" => Family::Gra,
            "graphs" => Family::Graphs,
            "graphs2" => Family::Graphs2,
            "gc" => Family::GC,
            "gc2" => Family::GC2,
            "hgc" => Family::HGC,
            "hgc2" => Family::HGC2,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Gra => "Gra",
            Family::Graphs => "Graphs",
            Family::Graphs2 => "Graphs2",
            Family::GC => "GC",
            Family::GC2 => "GC2",
            Family::HGC => "HGC",
            Family::HGC2 => "HGC2",
        }
    }

    pub fn is_operadic(self) -> bool {
        matches!(self, Family::Gra | Family::Graphs | Family::Graphs2)
    }

    pub fn is_gc(self) -> bool {
        matches!(self, Family::GC | Family::GC2)
    }

    pub fn is_hairy(self) -> bool {
        matches!(self, Family::HGC | Family::HGC2)
    }

    /// Lowest valence allowed for internal vertices.
    pub fn min_valence(self) -> usize {
        match self {
            Family::Gra => 0,
            Family::Graphs | Family::GC | Family::HGC => 3,
            Family::Graphs2 | Family::GC2 | Family::HGC2 => 2,
        }
    }

    pub fn allows_loops(self) -> bool {
        matches!(self, Family::Gra)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Twist {
    None,
    Alpha,
}

/// A complex family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub family: Family,
    pub n: i64,
    pub m: Option<i64>,
    pub arity: Option<usize>,
    pub twist: Twist,
}

impl ComplexSpec {
    pub fn operadic(family: Family, n: i64, arity: usize) -> Result<Self, ComplexError> {
        ComplexSpec { family, n, m: None, arity: Some(arity), twist: Twist::None }.validated()
    }

    pub fn graph_complex(family: Family, n: i64) -> Result<Self, ComplexError> {
        ComplexSpec { family, n, m: None, arity: None, twist: Twist::None }.validated()
    }

    pub fn hairy(family: Family, m: i64, n: i64) -> Result<Self, ComplexError> {
        ComplexSpec { family, n, m: Some(m), arity: None, twist: Twist::None }.validated()
    }

    pub fn with_twist(mut self, twist: Twist) -> Result<Self, ComplexError> {
        self.twist = twist;
        self.validated()
    }

    pub fn validated(self) -> Result<Self, ComplexError> {
        if self.n < 1 {
            return Err(ComplexError::Spec(format!("ambient dimension n = {} must be at least 1", self.n)));
        }
        let f = self.family;
        if f.is_operadic() && self.arity.is_none() {
            return Err(ComplexError::Spec(format!("{} needs an arity", f.name())));
        }
        if !f.is_operadic() && self.arity.is_some() {
            return Err(ComplexError::Spec(format!("{} takes no arity", f.name())));
        }
        if f.is_hairy() {
            match self.m {
                None => return Err(ComplexError::Spec("hairy families need m".into())),
                Some(m) if m < 1 || m > self.n => {
                    return Err(ComplexError::Spec(format!("need 1 <= m <= n, got m = {m}, n = {}", self.n)))
                }
                _ => {}
            }
        } else if self.m.is_some() {
            return Err(ComplexError::Spec("m is only meaningful for hairy families".into()));
        }
        if self.twist != Twist::None && !f.is_hairy() {
            return Err(ComplexError::Spec("twisting is only defined on hairy families".into()));
        }
        Ok(self)
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    pub fn symmetry(&self) -> Symmetry {
        if self.family.is_hairy() {
            Symmetry::hairy(self.parity(), self.m.unwrap_or(0))
        } else {
            Symmetry::labeled(self.parity())
        }
    }

    pub fn m_or_zero(&self) -> i64 {
        self.m.unwrap_or(0)
    }

    /// Checks that a graph belongs to the family (tadpoles only when `allow_tadpoles`).
    pub fn check_member(&self, g: &Graph, allow_tadpoles: bool) -> Result<(), ComplexError> {
        let f = self.family;
        let val = g.valences();
        let n_ext = g.num_external();
        if let Some(a) = self.arity {
            if n_ext != a {
                return Err(ComplexError::Domain(format!("arity {n_ext} differs from spec arity {a}")));
            }
        }
        if f.is_gc() && n_ext != 0 {
            return Err(ComplexError::Domain("graph complex elements have no external vertices".into()));
        }
        if f == Family::Gra && g.num_internal() != 0 {
            return Err(ComplexError::Domain("Gra graphs have no internal vertices".into()));
        }
        if g.has_loop() && !f.allows_loops() && !allow_tadpoles {
            return Err(ComplexError::Domain(format!("{} does not admit loops", f.name())));
        }
        if let Some(v) = (n_ext..g.num_vertices()).find(|&v| val[v] < f.min_valence()) {
            return Err(ComplexError::Domain(format!(
                "internal vertex i{} has valence {} below {}",
                v - n_ext + 1,
                val[v],
                f.min_valence()
            )));
        }
        if f.is_hairy() {
            if let Some(h) = (0..n_ext).find(|&h| val[h] != 1) {
                return Err(ComplexError::Domain(format!("hair {} has valence {}", h + 1, val[h])));
            }
        }
        if (f.is_gc() || f.is_hairy()) && !g.is_connected() {
            return Err(ComplexError::Domain("graph is not connected".into()));
        }
        if matches!(f, Family::Graphs | Family::Graphs2) && g.has_internal_component() {
            return Err(ComplexError::Domain("component without external vertices".into()));
        }
        Ok(())
    }

    /// Homological degree; differentials lower it by one.
    pub fn degree(&self, g: &Graph) -> Result<i64, ComplexError> {
        let n = self.n;
        let e = g.num_edges() as i64;
        let k = g.num_internal() as i64;
        match self.family {
            Family::Gra | Family::Graphs | Family::Graphs2 => Ok((n - 1) * e - n * k),
            Family::GC | Family::GC2 => Ok((n - 1) * e - n * k + n),
            Family::HGC | Family::HGC2 => {
                let val = g.valences();
                if let Some(h) = (0..g.num_external()).find(|&h| val[h] != 1) {
                    return Err(ComplexError::Domain(format!("hair {} has valence {}", h + 1, val[h])));
                }
                let hairs = g.num_external() as i64;
                Ok((n - 1) * e - n * k - self.m_or_zero() * (hairs - 1))
            }
        }
    }
}

/// Hair window of a hairy complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HairBound {
    Any,
    Exactly(usize),
    AtMost(usize),
}

impl HairBound {
    pub fn admits(self, h: usize) -> bool {
        match self {
            HairBound::Any => true,
            HairBound::Exactly(x) => h == x,
            HairBound::AtMost(x) => h <= x,
        }
    }

    pub fn max(self) -> Option<usize> {
        match self {
            HairBound::Any => None,
            HairBound::Exactly(x) | HairBound::AtMost(x) => Some(x),
        }
    }
}

/// Finite enumeration bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub loop_order: Option<i64>,
    pub hairs: HairBound,
    pub min_internal: usize,
    pub max_internal: Option<usize>,
    pub degree_range: Option<(i64, i64)>,
    pub connected: bool,
    pub allow_tadpoles: bool,
}

impl Default for Window {
    fn default() -> Self {
        Window {
            loop_order: None,
            hairs: HairBound::Any,
            min_internal: 0,
            max_internal: None,
            degree_range: None,
            connected: false,
            allow_tadpoles: false,
        }
    }
}

impl Window {
    pub fn loops(j: i64) -> Self {
        Window { loop_order: Some(j), ..Window::default() }
    }

    pub fn with_hairs(mut self, hairs: HairBound) -> Self {
        self.hairs = hairs;
        self
    }

    pub fn with_max_internal(mut self, v: usize) -> Self {
        self.max_internal = Some(v);
        self
    }

    pub fn with_internal_exactly(mut self, v: usize) -> Self {
        self.min_internal = v;
        self.max_internal = Some(v);
        self
    }

    pub fn with_degrees(mut self, lo: i64, hi: i64) -> Self {
        self.degree_range = Some((lo, hi));
        self
    }

    pub fn connected(mut self) -> Self {
        self.connected = true;
        self
    }

    pub fn with_tadpoles(mut self) -> Self {
        self.allow_tadpoles = true;
        self
    }

    pub fn admits_degree(&self, d: i64) -> bool {
        self.degree_range.is_none_or(|(lo, hi)| lo <= d && d <= hi)
    }
}
