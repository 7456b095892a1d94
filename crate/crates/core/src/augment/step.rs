//! One augmentation step: either a sparse separation of the matching or
//! a larger regularized matching built along an augmenting path.

use serde::Serialize;

use crate::dense::{BipartiteHost, DenseSpot, Instance, InstanceParams};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::matching::{spots_absorb, verify_regularized_matching, MatchingVerdict, RegularizedMatching, SetPair};
use crate::params::lemma46_tau_prime;
use crate::rational::{int, Rational};
use crate::regularity::CertifyOptions;

use super::extract::ExtractOptions;
use super::grow::grow_matching;
use super::path::{find_augmenting_or_separate, AlternatingPath, SeparationOrPath};

/// Explicit desk-scale parameters of one step.
#[derive(Debug, Clone)]
pub struct AugmentParams {
    pub omega: Rational,
    pub k: usize,
    pub tau: Rational,
    pub rho: Rational,
    /// Regularity of the output and the pruning fraction eps / 2.
    pub eps: Rational,
    /// Regularity of the intermediate matchings.
    pub inner_eps: Rational,
    /// Density floor of extracted pairs.
    pub pair_density: Rational,
    /// Size floor of extracted pairs.
    pub min_pair: usize,
    /// Required growth is (tau' / 2) n.
    pub tau_prime: Rational,
    pub certify: CertifyOptions,
}

impl AugmentParams {
    /// inner_eps = eps^3, pair_density = tau rho / (8 Omega), min_pair = 1
    /// and tau' from the level schedule.
    pub fn desk(omega: Rational, k: usize, tau: Rational, rho: Rational, eps: Rational) -> Result<AugmentParams> {
        let tau_prime = lemma46_tau_prime(&omega, &tau)?;
        Ok(AugmentParams {
            inner_eps: &eps * &eps * &eps,
            pair_density: &tau * &rho / (int(8) * &omega),
            min_pair: 1,
            tau_prime,
            certify: CertifyOptions::default(),
            omega,
            k,
            tau,
            rho,
            eps,
        })
    }
}

/// Per-level record of the parallel matchings.
#[derive(Debug, Clone, Serialize)]
pub struct StageRecord {
    pub level: usize,
    pub host_edges: usize,
    pub grown_pairs: usize,
    pub grown_vertices: usize,
    pub harmonised_pairs: usize,
    pub harmonised_vertices: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Improvement {
    pub matching: RegularizedMatching,
    pub path: AlternatingPath,
    pub stages: Vec<StageRecord>,
    /// |V(M) - V(M')|.
    pub lost: usize,
    /// |V(M')| - |V(M)|.
    pub gain: i64,
    pub loss_ok: bool,
    pub gain_ok: bool,
    pub nesting_ok: bool,
    pub regularity: MatchingVerdict,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "case")]
pub enum AugmentOutcome {
    /// Indices of M'' in M with the crossing-edge count.
    Separated {
        pairs: Vec<usize>,
        crossing_edges: usize,
        #[serde(with = "crate::rational::serde_rational")]
        bound: Rational,
    },
    Improved(Box<Improvement>),
}

/// Lowest-id `count` vertices of `set`.
fn lowest(set: &VertexSet, count: usize) -> VertexSet {
    set.lowest(count)
}

/// The `count` vertices of `set` with most neighbours in `target`, ties by id.
fn top_by_degree(g: &Graph, set: &VertexSet, target: &VertexSet, count: usize) -> VertexSet {
    let mask = target.mask(g.n());
    let mut v: Vec<usize> = set.iter().copied().collect();
    v.sort_by_key(|&x| (std::cmp::Reverse(g.deg_into(x, &mask)), x));
    v.truncate(count);
    v.into_iter().collect()
}

/// Whether every pair (T, Q) has T ⊆ C1 ∩ U and Q ⊆ C2 ∩ W for some
/// C1 in `firsts`, C2 in `seconds` and spot (U, W; F), either orientation.
pub fn pairs_nest(
    matching: &RegularizedMatching,
    firsts: &[VertexSet],
    seconds: &[VertexSet],
    spots: &[DenseSpot],
) -> bool {
    matching.pairs.iter().all(|p| {
        firsts.iter().any(|c1| p.a.is_subset(c1))
            && seconds.iter().any(|c2| p.b.is_subset(c2))
            && spots.iter().any(|s| s.holds_pair(&p.a, &p.b))
    })
}

/// One augment-or-separate step for `matching`, the set Y (given as the
/// union of `y_parts`; extracted pairs stay inside one part) and the
/// target ensemble.
pub fn augment_or_separate(
    g: &Graph,
    spots: &[DenseSpot],
    matching: &RegularizedMatching,
    y_parts: &[VertexSet],
    target: &[VertexSet],
    params: &AugmentParams,
) -> Result<AugmentOutcome> {
    if !spots_absorb(spots, matching) {
        return Err(Error::Precondition("the spots do not absorb the matching".into()));
    }
    for c in target.iter().chain(matching.pairs.iter().map(|p| &p.a)) {
        if let Some(i) = spots.iter().position(|s| !s.nests(c)) {
            return Err(Error::Precondition(format!("spot {i} cuts a target or first-side set")));
        }
    }
    let y = VertexSet::union_all(y_parts);
    let n = g.n();
    let path = match find_augmenting_or_separate(g, &params.tau, &params.omega, params.k, matching, &y, target)? {
        SeparationOrPath::M1 { pairs, crossing_edges, bound, .. } => {
            return Ok(AugmentOutcome::Separated { pairs, crossing_edges, bound })
        }
        SeparationOrPath::M2 { path } => path,
    };
    let top = path.len();
    let kn = int(params.k) * int(n);

    // Parallel matchings M^(l) for l = top, ..., 0.
    let mut grown: Vec<RegularizedMatching> = vec![RegularizedMatching::default(); top + 1];
    let mut host_edges = vec![0usize; top + 1];
    let mut p_side = VertexSet::union_all(target);
    for level in (0..=top).rev() {
        let y_level = path.y(level).clone();
        let host = BipartiteHost::induced(g, p_side.clone(), y_level.clone());
        host_edges[level] = host.edge_count();
        if host.edge_count() == 0 {
            return Err(Error::NoPairFound(format!("stage {level}: the level host has no edges")));
        }
        let ensemble: Vec<VertexSet> = if level == top {
            target.to_vec()
        } else {
            path.levels[level].pairs.iter().map(|&i| matching.pairs[i].a.clone()).collect()
        };
        let b_parts: Vec<VertexSet> = if level == 0 {
            y_parts.to_vec()
        } else {
            path.levels[level - 1].pairs.iter().map(|&i| matching.pairs[i].b.clone()).collect()
        };
        let inst = Instance {
            graph: g,
            cover: spots,
            host,
            ensemble,
            params: InstanceParams {
                k: params.k,
                omega: params.omega.clone(),
                rho: params.rho.clone(),
                nu: int(0),
                tau: Rational::new(host_edges[level].into(), 1.into()) / &kn,
            },
        };
        let opts = ExtractOptions {
            eps: params.inner_eps.clone(),
            min_density: params.pair_density.clone(),
            min_size: params.min_pair,
            b_parts,
            certify: params.certify.clone(),
        };
        let result = grow_matching(&inst, &opts)?;
        if result.matching.is_empty() {
            return Err(Error::NoPairFound(format!("stage {level}: no regular pair in the level host")));
        }
        grown[level] = result.matching;
        if level > 0 {
            let covered = grown[level].vertex_set();
            let prev_y = path.y(level - 1);
            let mut next = VertexSet::new();
            for p in &matching.pairs {
                let count = p.b.intersection(&covered).len();
                if count > 0 {
                    next = next.union(&top_by_degree(g, &p.a, prev_y, count));
                }
            }
            p_side = next;
        }
    }

    // Harmonised matchings N^(l).
    let half_eps = &params.eps / int(2);
    let mut harmonised: Vec<RegularizedMatching> = Vec::with_capacity(top + 1);
    harmonised.push(grown[0].clone());
    for level in 1..=top {
        let prev_cover = harmonised[level - 1].vertex_set();
        let v2 = grown[level].v2();
        let mut chosen = VertexSet::new();
        for p in &matching.pairs {
            let need = p.a.intersection(&prev_cover).len();
            let avail = p.b.intersection(&v2);
            if avail.len() < need {
                return Err(Error::Invariant(format!("stage {level}: partner set too small to harmonise")));
            }
            chosen = chosen.union(&lowest(&avail, need));
        }
        let mut pairs = Vec::new();
        for p in &grown[level].pairs {
            let t_hat = p.b.intersection(&chosen);
            if !t_hat.is_empty() && int(t_hat.len()) >= &half_eps * int(p.b.len()) {
                pairs.push(SetPair::new(lowest(&p.a, t_hat.len()), t_hat));
            }
        }
        harmonised.push(RegularizedMatching::new(pairs));
    }

    // Final matching: shrunk path pairs, untouched pairs, and every N^(l).
    let mut level_of = vec![None; matching.len()];
    for (l, lvl) in path.levels.iter().enumerate() {
        for &i in &lvl.pairs {
            level_of[i] = Some(l + 1);
        }
    }
    let mut pairs = Vec::new();
    for (i, p) in matching.pairs.iter().enumerate() {
        match level_of[i] {
            None => pairs.push(p.clone()),
            Some(l) => {
                let a_rest = p.a.difference(&harmonised[l - 1].v1());
                let b_free = p.b.difference(&harmonised[l].v2());
                if b_free.len() < a_rest.len() {
                    return Err(Error::Invariant(format!("pair {i}: not enough free partner vertices")));
                }
                if !a_rest.is_empty() && int(a_rest.len()) > &half_eps * int(p.a.len()) {
                    let b_rest = lowest(&b_free, a_rest.len());
                    pairs.push(SetPair::new(a_rest, b_rest));
                }
            }
        }
    }
    for h in &harmonised {
        pairs.extend(h.pairs.iter().cloned());
    }
    let result = RegularizedMatching::new(pairs);

    let before = matching.vertex_set();
    let after = result.vertex_set();
    let lost = before.difference(&after).len();
    let gain = after.len() as i64 - before.len() as i64;
    let firsts: Vec<VertexSet> = matching.pairs.iter().map(|p| p.a.clone()).chain(target.iter().cloned()).collect();
    let seconds: Vec<VertexSet> = matching.pairs.iter().map(|p| p.b.clone()).chain([y]).collect();
    let regularity = verify_regularized_matching(g, &result, &params.eps, &int(0), 1, &params.certify)?;
    let stages = (0..=top)
        .map(|level| StageRecord {
            level,
            host_edges: host_edges[level],
            grown_pairs: grown[level].len(),
            grown_vertices: grown[level].vertex_count(),
            harmonised_pairs: harmonised[level].len(),
            harmonised_vertices: harmonised[level].vertex_count(),
        })
        .collect();
    Ok(AugmentOutcome::Improved(Box::new(Improvement {
        loss_ok: int(lost) <= &params.eps * int(n),
        gain_ok: gain > 0 && Rational::from_integer(gain.into()) >= &params.tau_prime / int(2) * int(n),
        nesting_ok: pairs_nest(&result, &firsts, &seconds, spots),
        matching: result,
        path,
        stages,
        lost,
        gain,
        regularity,
    })))
}
