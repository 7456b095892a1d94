//! Maximum cardinality matching by Edmonds' blossom algorithm.

use std::collections::VecDeque;

use crate::graph::{norm_edge, Edge, Graph};

const NONE: usize = usize::MAX;

struct Search<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        Search {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grows an alternating tree from `root`; returns an exposed endpoint
    /// of an augmenting path if one exists.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.n();
        self.used.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Partner of every vertex in a maximum matching (`None` if exposed).
pub fn maximum_mate(g: &Graph) -> Vec<Option<usize>> {
    let mut s = Search::new(g);
    for &(u, v) in g.edges() {
        if s.mate[u] == NONE && s.mate[v] == NONE {
            s.mate[u] = v;
            s.mate[v] = u;
        }
    }
    for v in 0..g.n() {
        if s.mate[v] == NONE {
            if let Some(end) = s.find_path(v) {
                s.augment(end);
            }
        }
    }
    s.mate.into_iter().map(|m| (m != NONE).then_some(m)).collect()
}

/// Maximum matching together with the vertices missed by at least one
/// maximum matching: the outer vertices of the failed searches rooted at
/// each exposed vertex.
pub fn mate_and_missable(g: &Graph) -> (Vec<Option<usize>>, Vec<bool>) {
    let mate = maximum_mate(g);
    let mut s = Search::new(g);
    for (v, m) in mate.iter().enumerate() {
        s.mate[v] = m.unwrap_or(NONE);
    }
    let mut missable = vec![false; g.n()];
    for v in 0..g.n() {
        if s.mate[v] == NONE {
            let found = s.find_path(v);
            debug_assert!(found.is_none());
            for (flag, &used) in missable.iter_mut().zip(&s.used) {
                *flag |= used;
            }
        }
    }
    (mate, missable)
}

/// Edges of a maximum matching, each with the smaller endpoint first.
pub fn maximum_matching(g: &Graph) -> Vec<Edge> {
    mate_edges(&maximum_mate(g))
}

pub fn mate_edges(mate: &[Option<usize>]) -> Vec<Edge> {
    mate.iter().enumerate().filter_map(|(v, m)| m.filter(|&u| v < u).map(|u| norm_edge(v, u))).collect()
}

/// Size of a maximum matching.
pub fn matching_number(g: &Graph) -> usize {
    maximum_mate(g).iter().filter(|m| m.is_some()).count() / 2
}

/// Whether `edges` is a matching of G.
pub fn is_matching(g: &Graph, edges: &[Edge]) -> bool {
    let mut seen = vec![false; g.n()];
    edges.iter().all(|&(u, v)| {
        let ok = u < g.n() && v < g.n() && g.has_edge(u, v) && !seen[u] && !seen[v];
        if ok {
            seen[u] = true;
            seen[v] = true;
        }
        ok
    })
}
