//! Simple undirected graphs on vertex ids `0..n`, vertex sets, and the
//! plain-text edge-list format.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub fn norm_edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<usize>", into = "Vec<usize>")]
pub struct VertexSet(Vec<usize>);

impl From<Vec<usize>> for VertexSet {
    fn from(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from(iter.into_iter().collect::<Vec<_>>())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn range(lo: usize, hi: usize) -> Self {
        VertexSet((lo..hi).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: usize) {
        if let Err(i) = self.0.binary_search(&v) {
            self.0.insert(i, v);
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| !other.contains(v))
    }

    /// The first `count` ids in increasing order.
    pub fn lowest(&self, count: usize) -> VertexSet {
        VertexSet(self.0[..count.min(self.0.len())].to_vec())
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            if v < n {
                m[v] = true;
            }
        }
        m
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a VertexSet>>(sets: I) -> VertexSet {
        sets.into_iter().flat_map(|s| s.iter().copied()).collect()
    }
}

/// Undirected simple graph with sorted adjacency lists and a bit matrix
/// for constant-time adjacency tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Builds a graph, rejecting loops, out-of-range ids and repeated edges.
    pub fn new(n: usize, edges: &[Edge]) -> Result<Graph> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            normalized.push(norm_edge(u, v));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Input(format!("repeated edge {:?}", w[0])));
        }
        Ok(Self::build(n, normalized))
    }

    /// Builds a graph from any edge collection, dropping loops and repeats.
    pub fn from_edges_lossy<I: IntoIterator<Item = Edge>>(n: usize, edges: I) -> Graph {
        let mut normalized: Vec<Edge> =
            edges.into_iter().filter(|&(u, v)| u != v && u < n && v < n).map(|(u, v)| norm_edge(u, v)).collect();
        normalized.sort_unstable();
        normalized.dedup();
        Self::build(n, normalized)
    }

    pub fn empty(n: usize) -> Graph {
        Self::build(n, Vec::new())
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::build(n, edges)
    }

    fn build(n: usize, edges: Vec<Edge>) -> Graph {
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![Vec::new(); n];
        let mut bits = vec![0u64; n * words];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj, words, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::range(0, self.n)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of neighbours of `v` inside the masked set.
    pub fn deg_into(&self, v: usize, mask: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&u| mask[u]).count()
    }

    /// Ordered-pair count e(X, Y): pairs (x, y) in X x Y with xy an edge.
    /// Edges inside X ∩ Y are therefore counted twice.
    pub fn e_between(&self, xs: &VertexSet, ys: &VertexSet) -> usize {
        let mask = ys.mask(self.n);
        xs.iter().map(|&x| self.deg_into(x, &mask)).sum()
    }

    /// Number of edges with both ends in X.
    pub fn e_within(&self, xs: &VertexSet) -> usize {
        self.e_between(xs, xs) / 2
    }

    pub fn mindeg_into(&self, xs: &VertexSet, ys: &VertexSet) -> Option<usize> {
        let mask = ys.mask(self.n);
        xs.iter().map(|&x| self.deg_into(x, &mask)).min()
    }

    pub fn maxdeg_into(&self, xs: &VertexSet, ys: &VertexSet) -> Option<usize> {
        let mask = ys.mask(self.n);
        xs.iter().map(|&x| self.deg_into(x, &mask)).max()
    }

    /// Vertices of positive degree.
    pub fn support(&self) -> VertexSet {
        (0..self.n).filter(|&v| !self.adj[v].is_empty()).collect()
    }

    /// Same vertex ids, keeping only the given edges (which must exist).
    pub fn edge_subgraph(&self, edges: &[Edge]) -> Graph {
        Graph::from_edges_lossy(self.n, edges.iter().copied().filter(|&(u, v)| self.has_edge(u, v)))
    }

    /// Same vertex ids, with every edge touching `removed` deleted.
    pub fn without_vertices(&self, removed: &VertexSet) -> Graph {
        let mask = removed.mask(self.n);
        Graph::build(self.n, self.edges.iter().copied().filter(|&(u, v)| !mask[u] && !mask[v]).collect())
    }

    /// Subgraph induced by `verts`, relabelled to `0..verts.len()`; the
    /// returned vector maps new ids back to old ones.
    pub fn induced(&self, verts: &VertexSet) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| norm_edge(index[u], index[v]))
            .collect::<Vec<_>>();
        let mut edges = edges;
        edges.sort_unstable();
        (Graph::build(verts.len(), edges), verts.as_slice().to_vec())
    }

    /// Connected components of the subgraph induced by `within`, each
    /// sorted, listed by smallest member.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mask = within.mask(self.n);
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for &s in within {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &u in &self.adj[v] {
                    if mask[u] && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            out.push(VertexSet::from(comp));
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices())
    }

    /// Edges with both ends in `xs` and `ys` respectively (in either order).
    pub fn edges_between(&self, xs: &VertexSet, ys: &VertexSet) -> Vec<Edge> {
        let xm = xs.mask(self.n);
        let ym = ys.mask(self.n);
        self.edges.iter().copied().filter(|&(u, v)| (xm[u] && ym[v]) || (xm[v] && ym[u])).collect()
    }

    /// Parses the text format: a header `n m`, then `m` lines `u v` with
    /// `u < v`. Blank lines and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut lines =
            text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).enumerate().filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::Input("empty graph file".into()))?;
        let nums = parse_pair(header, hline)?;
        let (n, m) = nums;
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines {
            let (u, v) = parse_pair(line, i)?;
            if u >= v {
                return Err(Error::Input(format!("line {}: expected u < v, got {u} {v}", i + 1)));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Input(format!("header says {m} edges, found {}", edges.len())));
        }
        Graph::new(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn parse_pair(line: &str, index: usize) -> Result<(usize, usize)> {
    let mut parts = line.split_whitespace();
    let bad = || Error::Input(format!("line {}: expected two non-negative integers", index + 1));
    let a = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let b = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn ordered_pair_count_doubles_inside_edges() {
        let g = triangle();
        let all = g.vertices();
        assert_eq!(g.e_between(&all, &all), 6);
        assert_eq!(g.e_within(&all), 3);
    }

    #[test]
    fn path_count_between_ends_and_middle() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let ends = VertexSet::from(vec![0, 2]);
        let mid = VertexSet::from(vec![1]);
        assert_eq!(g.e_between(&ends, &mid), 2);
        assert_eq!(g.e_between(&mid, &ends), 2);
    }

    #[test]
    fn empty_sets_count_zero() {
        let g = triangle();
        assert_eq!(g.e_between(&VertexSet::new(), &g.vertices()), 0);
    }

    #[test]
    fn rejects_out_of_range_loops_and_repeats() {
        assert!(Graph::new(3, &[(0, 3)]).is_err());
        assert!(Graph::new(3, &[(1, 1)]).is_err());
        assert!(Graph::new(3, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let g = Graph::new(5, &[(0, 4), (1, 2), (2, 3)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "5 3\n0 4\n1 2\n2 3\n");
        assert_eq!(Graph::parse_text(&text).unwrap(), g);
    }

    #[test]
    fn text_parser_skips_comments_and_validates() {
        let g = Graph::parse_text("# header\n3 2\n\n0 1 # first\n1 2\n").unwrap();
        assert_eq!(g.m(), 2);
        assert!(Graph::parse_text("3 1\n1 0\n").is_err());
        assert!(Graph::parse_text("3 2\n0 1\n").is_err());
        assert!(Graph::parse_text("3 1\n0 x\n").is_err());
        assert!(Graph::parse_text("").is_err());
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 3);
        let (sub, map) = g.induced(&VertexSet::from(vec![1, 2, 4]));
        assert_eq!(sub.m(), 1);
        assert_eq!(map, vec![1, 2, 4]);
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from(vec![3, 1, 2, 2]);
        let b = VertexSet::from(vec![2, 5]);
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!(a.union(&b).as_slice(), &[1, 2, 3, 5]);
        assert_eq!(a.intersection(&b).as_slice(), &[2]);
        assert_eq!(a.difference(&b).as_slice(), &[1, 3]);
        assert!(!a.is_disjoint(&b));
    }
}
