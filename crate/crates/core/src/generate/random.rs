//! Random graphs with many high-degree vertices, and random instances
//! made of dense bipartite blocks.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::dense::{BipartiteHost, DenseSpot, InstanceFile, InstanceParams};
use crate::error::{Error, Result};
use crate::graph::{norm_edge, Graph, VertexSet};
use crate::lks::check_lks_membership;
use crate::rational::{ceil_usize, int, rat, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct RandomLksAudit {
    pub planted_large: usize,
    pub degree_target: usize,
    pub large: usize,
    pub lks: bool,
}

/// A planted set of ceil((1/2 + eta) n) vertices each raised to degree
/// ceil((1 + eta) k) by random edges.
pub fn random_lks<R: Rng>(n: usize, k: usize, eta: &Rational, rng: &mut R) -> Result<(Graph, RandomLksAudit)> {
    let target = ceil_usize(&((int(1) + eta) * int(k)));
    if n == 0 || target >= n {
        return Err(Error::Input(format!("degree target {target} needs more than n = {n} vertices")));
    }
    let planted = ceil_usize(&((rat(1, 2) + eta) * int(n))).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for &v in &order[..planted] {
        while deg[v] < target {
            let mut free: Vec<usize> = (0..n).filter(|&u| u != v && !adj[v][u]).collect();
            free.shuffle(rng);
            let u = free[0];
            adj[v][u] = true;
            adj[u][v] = true;
            deg[u] += 1;
            deg[v] += 1;
            edges.push(norm_edge(u, v));
        }
    }
    let g = Graph::new(n, &edges)?;
    let report = check_lks_membership(&g, n, k, eta)?;
    let audit =
        RandomLksAudit { planted_large: planted, degree_target: target, large: report.large.len(), lks: report.member };
    Ok((g, audit))
}

/// Random dense bipartite blocks used as spots; the host joins all first
/// sides to all second sides and the ensemble is the first sides.
pub fn spot_cross<R: Rng>(blocks: usize, max_side: usize, density: f64, rng: &mut R) -> Result<InstanceFile> {
    if blocks == 0 || max_side < 3 {
        return Err(Error::Input("spotCross needs at least one block with sides of 3 or more".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Domain(format!("block density must lie in (0, 1], got {density}")));
    }
    let mut edges = Vec::new();
    let mut sides = Vec::new();
    let mut next = 0;
    for _ in 0..blocks {
        let a = rng.gen_range(3..=max_side);
        let b = rng.gen_range(3..=max_side);
        for x in next..next + a {
            for y in next + a..next + a + b {
                if rng.gen_bool(density) {
                    edges.push((x, y));
                }
            }
        }
        sides.push((VertexSet::range(next, next + a), VertexSet::range(next + a, next + a + b)));
        next += a + b;
    }
    let g = Graph::new(next, &edges)?;
    let cover: Vec<DenseSpot> = sides.iter().map(|(u, w)| DenseSpot::induced(&g, u.clone(), w.clone())).collect();
    let a_side = VertexSet::union_all(sides.iter().map(|s| &s.0));
    let b_side = VertexSet::union_all(sides.iter().map(|s| &s.1));
    let host = BipartiteHost::induced(&g, a_side, b_side);
    let k = g.max_degree().max(1);
    let tau = Rational::new(host.edge_count().into(), (k * next).into());
    Ok(InstanceFile {
        n: next,
        edges: g.edges().to_vec(),
        cover,
        host,
        ensemble: sides.into_iter().map(|s| s.0).collect(),
        params: InstanceParams { k, omega: int(1), rho: rat(1, 2), nu: int(0), tau },
    })
}
