//! Inputs of the pair-finding and matching-growth steps: a graph with a
//! dense cover, a bipartite subgraph H and an ensemble covering one side
//! of H.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{norm_edge, Edge, Graph, VertexSet};
use crate::rational::{int, serde_rational, Rational};

use super::spot::{edge_disjoint, is_dense_spot, DenseSpot};

/// Bipartite subgraph H with classes A_H and B_H.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteHost {
    #[serde(rename = "A")]
    pub a: VertexSet,
    #[serde(rename = "B")]
    pub b: VertexSet,
    pub edges: Vec<Edge>,
}

impl BipartiteHost {
    /// All G-edges between the two classes.
    pub fn induced(g: &Graph, a: VertexSet, b: VertexSet) -> BipartiteHost {
        let edges = g.edges_between(&a, &b);
        BipartiteHost { a, b, edges }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_set(&self) -> HashSet<Edge> {
        self.edges.iter().map(|&(u, v)| norm_edge(u, v)).collect()
    }

    /// H restricted to the given sub-classes.
    pub fn restrict(&self, a: &VertexSet, b: &VertexSet) -> BipartiteHost {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| (a.contains(u) && b.contains(v)) || (a.contains(v) && b.contains(u)))
            .collect();
        BipartiteHost { a: a.clone(), b: b.clone(), edges }
    }

    pub fn max_degree(&self, n: usize) -> usize {
        Graph::from_edges_lossy(n, self.edges.iter().copied()).max_degree()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub k: usize,
    #[serde(rename = "Omega", with = "serde_rational")]
    pub omega: Rational,
    #[serde(with = "serde_rational")]
    pub rho: Rational,
    #[serde(with = "serde_rational")]
    pub nu: Rational,
    #[serde(with = "serde_rational")]
    pub tau: Rational,
}

/// Borrowed view used by the pipeline; the graph and cover stay fixed
/// while H and the ensemble change.
#[derive(Debug, Clone)]
pub struct Instance<'a> {
    pub graph: &'a Graph,
    pub cover: &'a [DenseSpot],
    pub host: BipartiteHost,
    pub ensemble: Vec<VertexSet>,
    pub params: InstanceParams,
}

/// Owned form for JSON files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub cover: Vec<DenseSpot>,
    #[serde(rename = "H")]
    pub host: BipartiteHost,
    pub ensemble: Vec<VertexSet>,
    pub params: InstanceParams,
}

impl InstanceFile {
    pub fn graph(&self) -> Result<Graph> {
        Graph::new(self.n, &self.edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceClass {
    /// All five conditions.
    Full,
    /// Without the edge-count condition on H and without A_H ⊆ ⋃ensemble.
    Relaxed,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub max_degree: bool,
    pub host: bool,
    pub cover: bool,
    pub ensemble: bool,
    pub nesting: bool,
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Checks membership of an instance in its class.
pub fn check_instance_class(inst: &Instance<'_>, class: InstanceClass) -> Result<InstanceReport> {
    let g = inst.graph;
    let n = g.n();
    let p = &inst.params;
    let k = int(p.k);
    let mut failures = Vec::new();
    for s in inst.ensemble.iter().chain([&inst.host.a, &inst.host.b]) {
        if let Some(&v) = s.iter().find(|&&v| v >= n) {
            return Err(Error::Input(format!("instance vertex {v} out of range")));
        }
    }

    let max_degree = int(g.max_degree()) <= &p.omega * &k;
    if !max_degree {
        failures.push(format!("maximum degree {} above Omega k", g.max_degree()));
    }

    let mut host = inst.host.a.is_disjoint(&inst.host.b);
    if !host {
        failures.push("H classes overlap".into());
    }
    for &(u, v) in &inst.host.edges {
        let crosses = (inst.host.a.contains(u) && inst.host.b.contains(v))
            || (inst.host.a.contains(v) && inst.host.b.contains(u));
        if !g.has_edge(u, v) || !crosses {
            host = false;
            failures.push(format!("H edge ({u},{v}) not a crossing edge of G"));
            break;
        }
    }
    if class == InstanceClass::Full && int(inst.host.edge_count()) < &p.tau * &k * int(n) {
        host = false;
        failures.push(format!("e(H) = {} below tau k n", inst.host.edge_count()));
    }

    let mut cover = edge_disjoint(inst.cover);
    if !cover {
        failures.push("cover spots share an edge".into());
    }
    let rho_k = &p.rho * &k;
    for (i, s) in inst.cover.iter().enumerate() {
        let check = is_dense_spot(g, s, &rho_k, &p.rho)?;
        if !check.is_spot {
            cover = false;
            failures.push(format!("cover spot {i}: {}", check.reason.unwrap_or_default()));
        }
    }
    let covered: HashSet<Edge> = inst.cover.iter().flat_map(|s| s.f.iter().copied()).collect();
    if let Some(e) = g.edges().iter().find(|e| !covered.contains(e)) {
        cover = false;
        failures.push(format!("edge {e:?} not covered"));
    }

    let mut ensemble = true;
    let nu_k = &p.nu * &k;
    for (i, a) in inst.ensemble.iter().enumerate() {
        if int(a.len()) < nu_k {
            ensemble = false;
            failures.push(format!("ensemble set {i} smaller than nu k"));
        }
        for b in &inst.ensemble[i + 1..] {
            if !a.is_disjoint(b) {
                ensemble = false;
                failures.push(format!("ensemble set {i} overlaps another"));
            }
        }
    }
    if class == InstanceClass::Full && !inst.host.a.is_subset(&VertexSet::union_all(&inst.ensemble)) {
        ensemble = false;
        failures.push("A_H not covered by the ensemble".into());
    }

    let mut nesting = true;
    for (i, a) in inst.ensemble.iter().enumerate() {
        if let Some(j) = inst.cover.iter().position(|s| !s.nests(a)) {
            nesting = false;
            failures.push(format!("ensemble set {i} cut by spot {j}"));
        }
    }

    let ok = max_degree && host && cover && ensemble && nesting;
    Ok(InstanceReport { max_degree, host, cover, ensemble, nesting, ok, failures })
}
