//! Simple undirected graphs with dense 0-based labels.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::bareiss_rank;

/// A simple undirected graph.
///
/// Edges are stored normalized (`u < v`) and sorted lexicographically. This
/// order is part of the public contract: the blowup labeling walks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list, normalizing orientation and order.
    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if e.1 >= vertex_count {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) references a vertex outside [0, {vertex_count})",
                    e.0, e.1
                )));
            }
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Self::from_canonical(vertex_count, set.into_iter().collect()))
    }

    /// `edges` must already be sorted, normalized and duplicate free.
    pub(crate) fn from_canonical(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Graph {
            vertex_count,
            edges,
            adjacency,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// True iff a traversal from vertex 0 reaches every vertex.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.vertex_count
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::NotConnected)
        }
    }

    /// Two-colors the graph by breadth-first search from vertex 0.
    pub fn bipartition(&self) -> Result<Bipartition> {
        self.require_connected()?;
        let mut side: Vec<Option<Side>> = vec![None; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        side[0] = Some(Side::X);
        let mut is_bipartite = true;
        while let Some(u) = queue.pop_front() {
            let su = side[u].expect("queued vertices are colored");
            for &w in &self.adjacency[u] {
                match side[w] {
                    None => {
                        side[w] = Some(su.other());
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => is_bipartite = false,
                    Some(_) => {}
                }
            }
        }
        Ok(Bipartition {
            side_of: side.into_iter().map(|s| s.expect("connected")).collect(),
            is_bipartite,
        })
    }

    pub fn is_bipartite(&self) -> Result<bool> {
        Ok(self.bipartition()?.is_bipartite)
    }

    /// Vertex-edge incidence matrix, `N x E`, with 0/1 entries.
    pub fn incidence_matrix(&self) -> Vec<Vec<BigInt>> {
        let mut b = vec![vec![BigInt::zero(); self.edges.len()]; self.vertex_count];
        for (s, &(u, v)) in self.edges.iter().enumerate() {
            b[u][s] = BigInt::from(1);
            b[v][s] = BigInt::from(1);
        }
        b
    }

    /// Rank of the incidence matrix over the rationals, by exact elimination.
    ///
    /// For a connected graph this is `N - 1` when bipartite and `N` otherwise.
    pub fn incidence_rank(&self) -> Result<usize> {
        self.require_connected()?;
        Ok(bareiss_rank(self.incidence_matrix()))
    }

    /// Integer combinatorial Laplacian `D - A`.
    pub fn combinatorial_laplacian(&self) -> Vec<Vec<BigInt>> {
        let n = self.vertex_count;
        let mut l = vec![vec![BigInt::zero(); n]; n];
        for (v, row) in l.iter_mut().enumerate() {
            row[v] = BigInt::from(self.degree(v));
        }
        for &(u, v) in &self.edges {
            l[u][v] = BigInt::from(-1);
            l[v][u] = BigInt::from(-1);
        }
        l
    }

    /// Parses the whitespace-separated edge-list format; `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        let mut max_label: Option<usize> = None;
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected two vertex labels, found {}", tokens.len()),
                });
            }
            let mut pair = [0usize; 2];
            for (slot, tok) in pair.iter_mut().zip(&tokens) {
                *slot = tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid vertex label {tok:?}"),
                })?;
            }
            max_label = Some(max_label.map_or(pair[0].max(pair[1]), |m| m.max(pair[0]).max(pair[1])));
            raw.push((pair[0], pair[1]));
        }
        Graph::from_edges(max_label.map_or(0, |m| m + 1), raw)
    }

    /// One `u v` line per edge, LF separated, no trailing blank line.
    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|(u, v)| format!("{u} {v}"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn generate(family: Family, k: usize) -> Result<Self> {
        match family {
            Family::Complete => {
                if k < 2 {
                    return Err(Error::invalid("complete graph needs k >= 2"));
                }
                let edges = (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))).collect();
                Ok(Self::from_canonical(k, edges))
            }
            Family::Path => {
                if k < 1 {
                    return Err(Error::invalid("path needs k >= 1"));
                }
                Ok(Self::from_canonical(k, (1..k).map(|v| (v - 1, v)).collect()))
            }
            Family::Cycle => {
                if k < 3 {
                    return Err(Error::invalid("cycle needs k >= 3"));
                }
                Graph::from_edges(k, (0..k).map(|v| (v, (v + 1) % k)))
            }
            Family::Star => {
                if k < 1 {
                    return Err(Error::invalid("star needs k >= 1"));
                }
                Ok(Self::from_canonical(k, (1..k).map(|v| (0, v)).collect()))
            }
        }
    }

    /// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Graph::from_edges(10, outer.chain(inner).chain(spokes).collect::<Vec<_>>())
            .expect("petersen edges are simple")
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Complete,
    Path,
    Cycle,
    Star,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "complete" | "k" => Ok(Family::Complete),
            "path" | "p" => Ok(Family::Path),
            "cycle" | "c" => Ok(Family::Cycle),
            "star" | "s" => Ok(Family::Star),
            other => Err(Error::invalid(format!("unknown graph family {other:?}"))),
        }
    }
}

/// A generator spec such as `complete:3`, `cycle:4` or `petersen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphSpec {
    Family(Family, usize),
    Petersen,
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match *self {
            GraphSpec::Family(f, k) => Graph::generate(f, k),
            GraphSpec::Petersen => Ok(Graph::petersen()),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("petersen") {
            return Ok(GraphSpec::Petersen);
        }
        let (fam, k) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("generator spec {s:?} is not of the form family:k")))?;
        let k = k
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("generator size {k:?} is not a non-negative integer")))?;
        Ok(GraphSpec::Family(fam.trim().parse()?, k))
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Petersen => f.write_str("petersen"),
            GraphSpec::Family(fam, k) => {
                let name = match fam {
                    Family::Complete => "complete",
                    Family::Path => "path",
                    Family::Cycle => "cycle",
                    Family::Star => "star",
                };
                write!(f, "{name}:{k}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Y,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side_of: Vec<Side>,
    pub is_bipartite: bool,
}

impl Bipartition {
    pub fn side(&self, s: Side) -> Vec<usize> {
        self.side_of
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x == s)
            .map(|(v, _)| v)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_triangle() {
        let g = Graph::parse_edge_list("0 1\n1 2\n0 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Graph::parse_edge_list("0 0"), Err(Error::SelfLoop(0)));
        assert_eq!(
            Graph::parse_edge_list("0 1\n# comment\n\n1 0"),
            Err(Error::DuplicateEdge(0, 1))
        );
        match Graph::parse_edge_list("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Graph::parse_edge_list("0 1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Graph::parse_edge_list("-1 2"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_trailing_comments_and_blank() {
        let g = Graph::parse_edge_list("\n2 1 # tail\n  \n1 0\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.to_edge_list(), "0 1\n1 2");
        assert_eq!(Graph::parse_edge_list("").unwrap().vertex_count(), 0);
    }

    #[test]
    fn families() {
        let k3 = Graph::generate(Family::Complete, 3).unwrap();
        assert_eq!((k3.vertex_count(), k3.edge_count()), (3, 3));
        let c4 = Graph::generate(Family::Cycle, 4).unwrap();
        assert_eq!((c4.vertex_count(), c4.edge_count()), (4, 4));
        assert!(c4.is_bipartite().unwrap());
        let p3 = Graph::generate(Family::Path, 3).unwrap();
        assert_eq!(p3.edges(), &[(0, 1), (1, 2)]);
        let s5 = Graph::generate(Family::Star, 5).unwrap();
        assert_eq!(s5.edge_count(), 4);
        assert!(s5.edges().iter().all(|&(u, _)| u == 0));
        assert_eq!(Graph::generate(Family::Path, 1).unwrap().edge_count(), 0);

        assert!(Graph::generate(Family::Cycle, 2).is_err());
        assert!(Graph::generate(Family::Complete, 1).is_err());
        assert!(Graph::generate(Family::Path, 0).is_err());
        assert!(Graph::generate(Family::Star, 0).is_err());
    }

    #[test]
    fn petersen_shape() {
        let p = Graph::petersen();
        assert_eq!((p.vertex_count(), p.edge_count()), (10, 15));
        assert!(p.degrees().iter().all(|&d| d == 3));
        assert!(!p.is_bipartite().unwrap());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::generate(Family::Complete, 3).unwrap().is_connected());
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!split.is_connected());
        assert_eq!(split.bipartition(), Err(Error::NotConnected));
        assert_eq!(split.incidence_rank(), Err(Error::NotConnected));
        assert!(Graph::from_edges(1, []).unwrap().is_connected());
        assert!(!Graph::from_edges(0, []).unwrap().is_connected());
    }

    #[test]
    fn bipartition_sides() {
        let c4 = Graph::generate(Family::Cycle, 4).unwrap().bipartition().unwrap();
        assert!(c4.is_bipartite);
        assert_eq!(c4.side(Side::X), vec![0, 2]);
        assert_eq!(c4.side(Side::Y), vec![1, 3]);

        let p3 = Graph::generate(Family::Path, 3).unwrap().bipartition().unwrap();
        assert_eq!(p3.side(Side::X), vec![0, 2]);
        assert_eq!(p3.side(Side::Y), vec![1]);

        assert!(!Graph::generate(Family::Complete, 3).unwrap().bipartition().unwrap().is_bipartite);
    }

    #[test]
    fn incidence_rank_dichotomy() {
        let rank = |f, k| Graph::generate(f, k).unwrap().incidence_rank().unwrap();
        assert_eq!(rank(Family::Complete, 3), 3);
        assert_eq!(rank(Family::Cycle, 4), 3);
        assert_eq!(rank(Family::Path, 3), 2);
        assert_eq!(Graph::petersen().incidence_rank().unwrap(), 10);
    }

    #[test]
    fn graph_spec_parsing() {
        assert_eq!("complete:3".parse::<GraphSpec>().unwrap(), GraphSpec::Family(Family::Complete, 3));
        assert_eq!("Petersen".parse::<GraphSpec>().unwrap(), GraphSpec::Petersen);
        assert!("cycle".parse::<GraphSpec>().is_err());
        assert!("blob:3".parse::<GraphSpec>().is_err());
        assert_eq!(GraphSpec::Family(Family::Star, 5).to_string(), "star:5");
    }

    #[test]
    fn out_of_range_label() {
        assert!(matches!(Graph::from_edges(2, [(0, 2)]), Err(Error::InvalidParameter(_))));
    }
}
