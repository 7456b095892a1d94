//! Extraction of one dense regular pair from a dense spot of an instance.

use std::collections::HashSet;

use serde::Serialize;

use crate::dense::{DenseSpot, Instance};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};
use crate::rational::{ceil_usize, int, min_rat, Rational};
use crate::regularity::{certify_regular, szemeredi_partition, CertMode, CertifyOptions};

/// Thresholds for one extraction.
#[derive(Debug, Clone)]
pub struct ExtractOptions {
    pub eps: Rational,
    pub min_density: Rational,
    pub min_size: usize,
    /// When non-empty, Y must lie inside one of these sets.
    pub b_parts: Vec<VertexSet>,
    pub certify: CertifyOptions,
}

impl ExtractOptions {
    /// Density tau rho / (4 Omega) and size max(1, ceil(alpha nu k)).
    pub fn for_instance(inst: &Instance<'_>, eps: Rational, alpha: &Rational) -> ExtractOptions {
        let p = &inst.params;
        ExtractOptions {
            eps,
            min_density: &p.tau * &p.rho / (int(4) * &p.omega),
            min_size: ceil_usize(&(alpha * &p.nu * int(p.k))).max(1),
            b_parts: Vec::new(),
            certify: CertifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractRoute {
    /// Top vertices by degree on both sides.
    Greedy,
    /// A pair of parts of a regularity partition of (X', Y').
    Partition,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairFound {
    pub spot: usize,
    /// Whether the spot was used with its sides swapped.
    pub swapped: bool,
    pub ensemble_set: usize,
    /// The chosen ensemble set was in the exclusion family.
    pub excluded_fallback: bool,
    #[serde(rename = "X")]
    pub x: VertexSet,
    #[serde(rename = "Y")]
    pub y: VertexSet,
    #[serde(with = "crate::rational::serde_rational")]
    pub density: Rational,
    pub mode: CertMode,
    pub route: ExtractRoute,
}

/// Ratio |F ∩ E(H)| / |F| per spot, in decreasing order (ties by index).
fn spot_order(cover: &[DenseSpot], host_edges: &HashSet<Edge>) -> Vec<(usize, usize)> {
    let mut order: Vec<(usize, usize)> = cover
        .iter()
        .enumerate()
        .map(|(i, s)| (i, s.f.iter().filter(|e| host_edges.contains(e)).count()))
        .filter(|&(_, h)| h > 0)
        .collect();
    order.sort_by(|&(i, hi), &(j, hj)| {
        let lhs = hi * cover[j].f.len();
        let rhs = hj * cover[i].f.len();
        rhs.cmp(&lhs).then(i.cmp(&j))
    });
    order
}

fn spot_edges_between(spot: &DenseSpot, xs: &VertexSet, ys: &VertexSet) -> usize {
    spot.f.iter().filter(|&&(a, b)| (xs.contains(a) && ys.contains(b)) || (xs.contains(b) && ys.contains(a))).count()
}

/// Sorts `side` by neighbours in `other`, most first, ties by id.
fn by_degree(g: &Graph, side: &VertexSet, other: &VertexSet) -> Vec<usize> {
    let mask = other.mask(g.n());
    let mut v: Vec<usize> = side.iter().copied().collect();
    v.sort_by_key(|&x| (std::cmp::Reverse(g.deg_into(x, &mask)), x));
    v
}

struct Candidate {
    x: VertexSet,
    y: VertexSet,
    density: Rational,
    mode: CertMode,
    route: ExtractRoute,
}

fn accept(g: &Graph, x: &VertexSet, y: &VertexSet, opts: &ExtractOptions) -> Result<Option<(Rational, CertMode)>> {
    let verdict = certify_regular(g, x, y, &opts.eps, &opts.certify)?;
    Ok((verdict.regular && verdict.density >= opts.min_density).then_some((verdict.density, verdict.mode)))
}

fn greedy_pair(g: &Graph, xp: &VertexSet, yp: &VertexSet, opts: &ExtractOptions) -> Result<Option<Candidate>> {
    let xs = by_degree(g, xp, yp);
    for size in (opts.min_size..=xp.len().min(yp.len())).rev() {
        let x: VertexSet = xs[..size].iter().copied().collect();
        let y: VertexSet = by_degree(g, yp, &x)[..size].iter().copied().collect();
        if let Some((density, mode)) = accept(g, &x, &y, opts)? {
            return Ok(Some(Candidate { x, y, density, mode, route: ExtractRoute::Greedy }));
        }
    }
    Ok(None)
}

fn partition_pair(
    g: &Graph,
    xp: &VertexSet,
    yp: &VertexSet,
    eps_rl: &Rational,
    opts: &ExtractOptions,
) -> Result<Option<Candidate>> {
    let verts: Vec<usize> = xp.iter().chain(yp.iter()).copied().collect();
    let local = |v: usize| verts.iter().position(|&u| u == v);
    let edges: Vec<Edge> =
        g.edges_between(xp, yp).into_iter().filter_map(|(a, b)| Some((local(a)?, local(b)?))).collect();
    let bip = Graph::from_edges_lossy(verts.len(), edges);
    let classes = [VertexSet::range(0, xp.len()), VertexSet::range(xp.len(), verts.len())];
    let partition = match szemeredi_partition(&bip, eps_rl, 2, &classes) {
        Ok(p) => p,
        Err(Error::Domain(_)) | Err(Error::NotConverged(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let lift = |s: &VertexSet| -> VertexSet { s.iter().map(|&i| verts[i]).collect() };
    let mut best: Option<Candidate> = None;
    let left: Vec<&VertexSet> = partition.parts.iter().filter(|p| p.is_subset(&classes[0])).collect();
    let right: Vec<&VertexSet> = partition.parts.iter().filter(|p| p.is_subset(&classes[1])).collect();
    for a in &left {
        for b in &right {
            if a.len() < opts.min_size {
                continue;
            }
            let (x, y) = (lift(a), lift(b));
            if let Some((density, mode)) = accept(g, &x, &y, opts)? {
                if best.as_ref().is_none_or(|c| density > c.density) {
                    best = Some(Candidate { x, y, density, mode, route: ExtractRoute::Partition });
                }
            }
        }
    }
    Ok(best)
}

/// Finds a spot (U, W; F), an ensemble set A and an eps-regular pair
/// X ⊆ A ∩ U ∩ A_H, Y ⊆ W ∩ B_H with |X| = |Y| ≥ min_size and density at
/// least min_density. Spots are tried by decreasing share of H-edges; in
/// each the orientation carrying more H-edges from U ∩ A_H to W ∩ B_H is
/// used, and ensemble sets outside the exclusion family come first.
pub fn find_regular_pair_in_spot(inst: &Instance<'_>, opts: &ExtractOptions) -> Result<PairFound> {
    let g = inst.graph;
    let host = &inst.host;
    if host.edge_count() == 0 {
        return Err(Error::Precondition("the bipartite host H has no edges".into()));
    }
    let p = &inst.params;
    let eps_rl = min_rat(&opts.eps, &(&p.rho * &p.rho / (int(8) * &p.omega)));
    let host_edges = host.edge_set();
    for (si, _) in spot_order(inst.cover, &host_edges) {
        let spot = &inst.cover[si];
        let forward = spot_edges_between(spot, &spot.u.intersection(&host.a), &spot.w.intersection(&host.b));
        let backward = spot_edges_between(spot, &spot.w.intersection(&host.a), &spot.u.intersection(&host.b));
        let swapped = backward > forward;
        let (u, w) = if swapped { (&spot.w, &spot.u) } else { (&spot.u, &spot.w) };
        let f_size = int(spot.f.len());
        let w_all = w.intersection(&host.b);
        let parts: Vec<VertexSet> = if opts.b_parts.is_empty() {
            vec![w_all.clone()]
        } else {
            opts.b_parts.iter().map(|part| w_all.intersection(part)).filter(|p| !p.is_empty()).collect()
        };
        let mut candidates: Vec<(bool, Rational, usize, VertexSet, VertexSet)> = Vec::new();
        for (ai, a) in inst.ensemble.iter().enumerate() {
            let xp = a.intersection(u).intersection(&host.a);
            if xp.len() < opts.min_size {
                continue;
            }
            let threshold = &p.tau / &p.omega * &f_size * int(a.len()) / int(u.len());
            let excluded = int(g.e_between(&xp, &w_all)) < threshold;
            for yp in &parts {
                let e = g.e_between(&xp, yp);
                if e == 0 || yp.len() < opts.min_size {
                    continue;
                }
                let density = Rational::new(e.into(), (xp.len() * yp.len()).into());
                candidates.push((excluded, density, ai, xp.clone(), yp.clone()));
            }
        }
        candidates.sort_by(|l, r| l.0.cmp(&r.0).then(r.1.cmp(&l.1)).then(l.2.cmp(&r.2)));
        for (excluded, _, ai, xp, yp) in candidates {
            let found = match greedy_pair(g, &xp, &yp, opts)? {
                Some(c) => Some(c),
                None => partition_pair(g, &xp, &yp, &eps_rl, opts)?,
            };
            if let Some(c) = found {
                return Ok(PairFound {
                    spot: si,
                    swapped,
                    ensemble_set: ai,
                    excluded_fallback: excluded,
                    x: c.x,
                    y: c.y,
                    density: c.density,
                    mode: c.mode,
                    route: c.route,
                });
            }
        }
    }
    Err(Error::NoPairFound(format!(
        "no eps-regular pair of density >= {} and size >= {} in any spot",
        opts.min_density, opts.min_size
    )))
}
