//! Text encoding `N<int> k<int> | a>b a>b ...`.

use super::{Graph, GraphError};

pub fn encode(g: &Graph) -> String {
    let n = g.num_external();
    let name = |v: u8| -> String {
        let v = v as usize;
        if v < n {
            format!("{}", v + 1)
        } else {
            format!("i{}", v - n + 1)
        }
    };
    let mut s = format!("N{} k{} |", n, g.num_internal());
    for &(a, b) in g.edges() {
        s.push(' ');
        s.push_str(&name(a));
        s.push('>');
        s.push_str(&name(b));
    }
    s
}

/// Parses an encoding into a graph with the given edge order and directions.
pub fn decode(text: &str) -> Result<Graph, GraphError> {
    let mut p = Parser { s: text.as_bytes(), i: 0 };
    p.expect(b'N')?;
    let n = p.number()?;
    p.expect(b' ')?;
    p.expect(b'k')?;
    let k = p.number()?;
    p.expect(b' ')?;
    p.expect(b'|')?;
    let mut edges = Vec::new();
    while p.i < p.s.len() {
        p.expect(b' ')?;
        let a = p.vertex(n, k)?;
        p.expect(b'>')?;
        let b = p.vertex(n, k)?;
        edges.push((a, b));
    }
    Graph::from_ids(n, k, edges).map_err(|e| GraphError::Format { pos: p.i, msg: e.to_string() })
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, GraphError> {
        Err(GraphError::Format { pos: self.i, msg: msg.into() })
    }

    fn expect(&mut self, c: u8) -> Result<(), GraphError> {
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn number(&mut self) -> Result<usize, GraphError> {
        let start = self.i;
        while self.s.get(self.i).is_some_and(|c| c.is_ascii_digit()) {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected a number");
        }
        let digits = std::str::from_utf8(&self.s[start..self.i]).unwrap();
        digits.parse().or_else(|_| {
            self.i = start;
            self.err("number out of range")
        })
    }

    fn vertex(&mut self, n: usize, k: usize) -> Result<u8, GraphError> {
        let start = self.i;
        let internal = self.s.get(self.i) == Some(&b'i');
        if internal {
            self.i += 1;
        }
        let v = self.number()?;
        let ok = if internal { (1..=k).contains(&v) } else { (1..=n).contains(&v) };
        if !ok {
            let kind = if internal { "internal" } else { "external" };
            self.i = start;
            return self.err(format!("{kind} vertex {v} out of range"));
        }
        Ok(if internal { (n + v - 1) as u8 } else { (v - 1) as u8 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_graph_text() {
        let g = Graph::from_ids(2, 0, vec![(0, 1)]).unwrap();
        assert_eq!(encode(&g), "N2 k0 | 1>2");
        assert_eq!(decode("N2 k0 | 1>2").unwrap(), g);
    }

    #[test]
    fn tripod_text() {
        let g = Graph::from_ids(3, 1, vec![(3, 0), (3, 1), (3, 2)]).unwrap();
        assert_eq!(encode(&g), "N3 k1 | i1>1 i1>2 i1>3");
        assert_eq!(decode(&encode(&g)).unwrap(), g);
    }

    #[test]
    fn out_of_range_vertex_reports_position() {
        match decode("N2 k0 | 1>3") {
            Err(GraphError::Format { pos, msg }) => {
                assert_eq!(pos, 10);
                assert!(msg.contains("out of range"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn garbage_is_rejected() {
        assert!(decode("N2 k0 1>2").is_err());
        assert!(decode("M2 k0 |").is_err());
    }
}
