//! Qubit connectivity graphs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Undirected simple graph on qubits 1..=n. Edges are stored as `(k, l)`
/// with `k < l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl ConnectivityGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::range("graph needs at least one qubit"));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::range(format!("self-loop on qubit {a}")));
            }
            for q in [a, b] {
                if q == 0 || q > n {
                    return Err(Error::range(format!("qubit {q} outside [1, {n}]")));
                }
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(ConnectivityGraph { n, edges: set })
    }

    /// Nearest-neighbour chain 1-2-...-n.
    pub fn chain(n: usize) -> Result<Self> {
        ConnectivityGraph::new(n, (1..n).map(|q| (q, q + 1)))
    }

    /// Row-major `rows x cols` lattice with horizontal and vertical edges.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::range(format!("grid dimensions {rows}x{cols} must be positive")));
        }
        let id = |r: usize, c: usize| r * cols + c + 1;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        ConnectivityGraph::new(rows * cols, edges)
    }

    /// All-to-all connectivity.
    pub fn complete(n: usize) -> Result<Self> {
        let edges = (1..=n).flat_map(|k| (k + 1..=n).map(move |l| (k, l)));
        ConnectivityGraph::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Edge-list text: an `n <count>` header then one `k l` pair per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("n {}\n", self.n);
        for (a, b) in self.edges() {
            writeln!(s, "{a} {b}").unwrap();
        }
        s
    }

    /// Parses the edge-list format. Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let line_no = lineno + 1;
            let col = raw.find(|c: char| !c.is_whitespace()).unwrap_or(0) + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(line_no, col, format!("expected an integer, found {s:?}")))
            };
            match fields.as_slice() {
                ["n", count] if n.is_none() => n = Some(num(count)?),
                [a, b] if n.is_some() => edges.push((num(a)?, num(b)?)),
                _ if n.is_none() => {
                    return Err(Error::parse(line_no, col, "expected header `n <count>`"))
                }
                _ => return Err(Error::parse(line_no, col, "expected an edge `k l`")),
            }
        }
        let n = n.ok_or_else(|| Error::parse(1, 1, "missing header `n <count>`"))?;
        ConnectivityGraph::new(n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_edges() {
        let g = ConnectivityGraph::chain(3).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
        assert_eq!(ConnectivityGraph::chain(1).unwrap().num_edges(), 0);
    }

    #[test]
    fn complete_edge_count() {
        assert_eq!(ConnectivityGraph::complete(4).unwrap().num_edges(), 6);
        assert_eq!(ConnectivityGraph::complete(7).unwrap().num_edges(), 21);
    }

    #[test]
    fn grid_edge_count_matches_enumeration() {
        for (r, c) in [(2, 3), (2, 2), (3, 3), (1, 5), (4, 2)] {
            let g = ConnectivityGraph::grid(r, c).unwrap();
            // brute force over all qubit pairs at lattice distance one
            let mut count = 0;
            for a in 0..r * c {
                for b in a + 1..r * c {
                    let (ra, ca, rb, cb) = (a / c, a % c, b / c, b % c);
                    if ra.abs_diff(rb) + ca.abs_diff(cb) == 1 {
                        count += 1;
                    }
                }
            }
            assert_eq!(g.num_edges(), count);
        }
        assert_eq!(ConnectivityGraph::grid(2, 3).unwrap().num_edges(), 7);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ConnectivityGraph::grid(0, 3).is_err());
        assert!(ConnectivityGraph::chain(0).is_err());
        assert!(ConnectivityGraph::new(3, [(1, 1)]).is_err());
        assert!(ConnectivityGraph::new(3, [(1, 4)]).is_err());
    }

    #[test]
    fn deduplicates_edges() {
        let g = ConnectivityGraph::new(3, [(1, 2), (2, 1), (1, 2)]).unwrap();
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn text_round_trip() {
        let g = ConnectivityGraph::grid(2, 3).unwrap();
        assert_eq!(ConnectivityGraph::from_text(&g.to_text()).unwrap(), g);
        let parsed = ConnectivityGraph::from_text("# ring\nn 3\n1 2\n2 3\n\n3 1\n").unwrap();
        assert!(parsed.contains(1, 3));
    }

    #[test]
    fn text_errors_carry_position() {
        match ConnectivityGraph::from_text("n 3\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(ConnectivityGraph::from_text("1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(ConnectivityGraph::from_text("").is_err());
    }
}
