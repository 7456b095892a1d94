//! Cluster-graph stage: classification of clusters, the separator pair
//! (Q, N0) at a swap fixpoint, the S^R closure and the extension N1.

use std::collections::VecDeque;

use serde::Serialize;

use crate::dense::SparseDecomposition;
use crate::error::{Error, Result};
use crate::graph::{norm_edge, Edge, Graph, VertexSet};
use crate::matching::{gallai_edmonds, maximum_mate};
use crate::rational::Rational;

/// Graph on cluster indices with an edge when the G_reg density between
/// the two clusters is at least gamma^2.
pub fn cluster_graph(nabla: &SparseDecomposition, n: usize) -> Graph {
    let greg = nabla.greg_graph(n);
    let threshold = &nabla.params.gamma * &nabla.params.gamma;
    let clusters = &nabla.clusters;
    let mut edges = Vec::new();
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let size = clusters[i].len() * clusters[j].len();
            if size == 0 {
                continue;
            }
            let density = Rational::new(greg.e_between(&clusters[i], &clusters[j]).into(), size.into());
            if density >= threshold {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges_lossy(clusters.len(), edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterSide {
    Small,
    Large,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterClasses {
    pub side: Vec<ClusterSide>,
    /// Small clusters inside S0.
    pub in_s0: Vec<bool>,
}

impl ClusterClasses {
    /// Every cluster must lie inside S or inside L.
    pub fn new(
        nabla: &SparseDecomposition,
        small: &VertexSet,
        large: &VertexSet,
        s0: &VertexSet,
    ) -> Result<ClusterClasses> {
        let mut side = Vec::with_capacity(nabla.clusters.len());
        let mut in_s0 = Vec::with_capacity(nabla.clusters.len());
        for (i, c) in nabla.clusters.iter().enumerate() {
            if c.is_subset(small) {
                side.push(ClusterSide::Small);
                in_s0.push(c.is_subset(s0));
            } else if c.is_subset(large) {
                side.push(ClusterSide::Large);
                in_s0.push(false);
            } else {
                return Err(Error::Input(format!("cluster {i} meets both S and L")));
            }
        }
        Ok(ClusterClasses { side, in_s0 })
    }

    pub fn is_small(&self, c: usize) -> bool {
        self.side[c] == ClusterSide::Small
    }

    pub fn is_large(&self, c: usize) -> bool {
        self.side[c] == ClusterSide::Large
    }
}

/// Separator Q with a matching N0 given as (q, partner) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparatorPair {
    #[serde(rename = "Q")]
    pub q: VertexSet,
    #[serde(rename = "N0")]
    pub n0: Vec<Edge>,
    /// Alternating-path swaps applied after the initial decomposition.
    pub swaps: usize,
}

impl SeparatorPair {
    /// Partner of every cluster under N0.
    pub fn mates(&self, count: usize) -> Vec<Option<usize>> {
        let mut mate = vec![None; count];
        for &(a, b) in &self.n0 {
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
        mate
    }

    pub fn covered(&self) -> VertexSet {
        self.n0.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

/// Clusters of S0 isolated in the cluster graph minus Q.
pub fn isolated_s0(cg: &Graph, q: &VertexSet, classes: &ClusterClasses) -> VertexSet {
    let qmask = q.mask(cg.n());
    (0..cg.n()).filter(|&c| classes.in_s0[c] && !qmask[c] && cg.neighbors(c).iter().all(|&d| qmask[d])).collect()
}

/// Number of isolated S0 clusters left uncovered by N0.
pub fn separator_objective(cg: &Graph, pair: &SeparatorPair, classes: &ClusterClasses) -> usize {
    let covered = pair.covered();
    isolated_s0(cg, &pair.q, classes).difference(&covered).len()
}

/// An alternating path z, d1, c1, ..., dm, cm from an uncovered isolated
/// S0 cluster z whose swap uncovers cm, a cluster outside that class.
fn improving_path(cg: &Graph, pair: &SeparatorPair, classes: &ClusterClasses) -> Option<Vec<usize>> {
    let count = cg.n();
    let qmask = pair.q.mask(count);
    let mate = pair.mates(count);
    let isolated = isolated_s0(cg, &pair.q, classes).mask(count);
    for z in 0..count {
        if !isolated[z] || mate[z].is_some() {
            continue;
        }
        let mut parent: Vec<Option<usize>> = vec![None; count];
        let mut seen = vec![false; count];
        seen[z] = true;
        let mut queue = VecDeque::from([z]);
        while let Some(x) = queue.pop_front() {
            for &d in cg.neighbors(x) {
                if !qmask[d] || seen[d] || mate[x] == Some(d) {
                    continue;
                }
                let Some(c) = mate[d] else { continue };
                if seen[c] {
                    continue;
                }
                seen[d] = true;
                seen[c] = true;
                parent[d] = Some(x);
                parent[c] = Some(d);
                if !isolated[c] {
                    let mut path = vec![c];
                    let mut cur = c;
                    while let Some(p) = parent[cur] {
                        path.push(p);
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(c);
            }
        }
    }
    None
}

/// Flips N0 along z, d1, c1, ..., dm, cm: each d_i is rematched to c_(i-1).
fn apply_swap(pair: &mut SeparatorPair, path: &[usize]) {
    let mut n0: Vec<Edge> = pair.n0.clone();
    for step in path[1..].chunks(2) {
        let d = step[0];
        n0.retain(|&(q, _)| q != d);
    }
    for (i, step) in path[1..].chunks(2).enumerate() {
        n0.push((step[0], path[2 * i]));
    }
    n0.sort_unstable();
    pair.n0 = n0;
    pair.swaps += 1;
}

/// Separator pair from the Gallai–Edmonds decomposition of the cluster
/// graph, then improved by alternating-path swaps until no swap reduces
/// the number of uncovered isolated S0 clusters.
pub fn choose_separator_pair(cg: &Graph, classes: &ClusterClasses) -> Result<SeparatorPair> {
    let ge = gallai_edmonds(cg)?;
    let mut pair = SeparatorPair { q: ge.q, n0: ge.m, swaps: 0 };
    while let Some(path) = improving_path(cg, &pair, classes) {
        apply_swap(&mut pair, &path);
    }
    Ok(pair)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    #[serde(rename = "SR")]
    pub sr: VertexSet,
    /// Isolated S0 clusters.
    #[serde(rename = "SI")]
    pub isolated: VertexSet,
    /// SR ⊆ isolated ⊆ SR ∪ V(N0).
    pub claim_sr_isolated: bool,
    /// No Q cluster matched to an S0 cluster outside SR sees SR.
    pub q_partner_s0: bool,
    /// No Q cluster matched outside the isolated class sees SR.
    pub q_partner_other: bool,
}

/// Minimal SR containing the uncovered isolated S0 clusters and closed
/// under: Z in SR, D in Q adjacent to Z, CD in N0, C small ⇒ C in SR.
pub fn build_sr(cg: &Graph, pair: &SeparatorPair, classes: &ClusterClasses) -> ClosureReport {
    let count = cg.n();
    let qmask = pair.q.mask(count);
    let mate = pair.mates(count);
    let isolated = isolated_s0(cg, &pair.q, classes);
    let covered = pair.covered();
    let mut in_sr = vec![false; count];
    let mut queue: VecDeque<usize> = isolated.difference(&covered).iter().copied().collect();
    for &z in &queue {
        in_sr[z] = true;
    }
    while let Some(z) = queue.pop_front() {
        for &d in cg.neighbors(z) {
            if !qmask[d] {
                continue;
            }
            if let Some(c) = mate[d] {
                if classes.is_small(c) && !in_sr[c] {
                    in_sr[c] = true;
                    queue.push_back(c);
                }
            }
        }
    }
    let sr: VertexSet = (0..count).filter(|&c| in_sr[c]).collect();
    let sees_sr = |d: usize| cg.neighbors(d).iter().any(|&z| in_sr[z]);
    let claim_sr_isolated = sr.is_subset(&isolated) && isolated.is_subset(&sr.union(&covered));
    let q_partner_s0 = pair.n0.iter().filter(|&&(_, c)| classes.in_s0[c] && !in_sr[c]).all(|&(d, _)| !sees_sr(d));
    let q_partner_other = pair.n0.iter().filter(|&&(_, c)| !isolated.contains(c)).all(|&(d, _)| !sees_sr(d));
    ClosureReport { sr, isolated, claim_sr_isolated, q_partner_s0, q_partner_other }
}

#[derive(Debug, Clone, Serialize)]
pub struct Extension {
    #[serde(rename = "N1")]
    pub n1: Vec<Edge>,
    /// No cluster-graph edge between two clusters missed by N1.
    pub uncovered_independent: bool,
}

/// Perfect matching of the subgraph induced by `verts`, if one exists.
fn perfect_matching_within(cg: &Graph, verts: &VertexSet) -> Option<Vec<Edge>> {
    let (sub, map) = cg.induced(verts);
    let mate = maximum_mate(&sub);
    if mate.iter().any(Option::is_none) {
        return None;
    }
    Some(mate.iter().enumerate().filter_map(|(i, m)| m.filter(|&j| i < j).map(|j| norm_edge(map[i], map[j]))).collect())
}

/// N1 ⊇ N0: components of the cluster graph minus Q that meet V(N0) get
/// a perfect matching of the rest; other non-singleton components get a
/// matching missing exactly their lowest large cluster.
pub fn extend_to_n1(cg: &Graph, pair: &SeparatorPair, classes: &ClusterClasses) -> Result<Extension> {
    let count = cg.n();
    let covered = pair.covered();
    let outside = (0..count).collect::<VertexSet>().difference(&pair.q);
    let mut n1: Vec<Edge> = pair.n0.clone();
    for comp in cg.components_within(&outside) {
        let hit = comp.intersection(&covered);
        let rest = if !hit.is_empty() {
            comp.difference(&hit)
        } else if comp.len() > 1 {
            let Some(&exposed) = comp.iter().find(|&&c| classes.is_large(c)) else {
                return Err(Error::Input(format!("component {:?} has no large cluster", comp.as_slice())));
            };
            comp.difference(&VertexSet::from(vec![exposed]))
        } else {
            continue;
        };
        let matching = perfect_matching_within(cg, &rest)
            .ok_or_else(|| Error::Invariant(format!("component {:?} is not factor-critical", comp.as_slice())))?;
        n1.extend(matching);
    }
    let covered1: VertexSet = n1.iter().flat_map(|&(a, b)| [a, b]).collect();
    let missed = (0..count).collect::<VertexSet>().difference(&covered1);
    let uncovered_independent = cg.e_within(&missed) == 0;
    Ok(Extension { n1, uncovered_independent })
}
