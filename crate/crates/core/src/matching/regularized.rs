//! Regularized matchings: ordered lists of disjoint set pairs, each an
//! eps-regular pair of density at least d with sides of equal size at
//! least ell.

use serde::{Deserialize, Serialize};

use crate::dense::DenseSpot;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::{int, Rational};
use crate::regularity::{certify_regular, CertMode, CertifyOptions, RegularityVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPair {
    #[serde(rename = "A")]
    pub a: VertexSet,
    #[serde(rename = "B")]
    pub b: VertexSet,
}

impl SetPair {
    pub fn new(a: VertexSet, b: VertexSet) -> SetPair {
        SetPair { a, b }
    }

    pub fn reversed(&self) -> SetPair {
        SetPair { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn vertices(&self) -> VertexSet {
        self.a.union(&self.b)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularizedMatching {
    pub pairs: Vec<SetPair>,
    #[serde(default, with = "crate::rational::serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
    #[serde(default, with = "crate::rational::serde_rational::option", skip_serializing_if = "Option::is_none")]
    pub d: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
}

/// Projections of a regularized matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Accessors {
    pub v1: VertexSet,
    pub v2: VertexSet,
    pub v: VertexSet,
    pub first_sets: Vec<VertexSet>,
    pub second_sets: Vec<VertexSet>,
}

impl RegularizedMatching {
    pub fn new(pairs: Vec<SetPair>) -> RegularizedMatching {
        RegularizedMatching { pairs, ..Default::default() }
    }

    pub fn with_params(mut self, epsilon: Rational, d: Rational, ell: usize) -> Self {
        self.epsilon = Some(epsilon);
        self.d = Some(d);
        self.ell = Some(ell);
        self
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn v1(&self) -> VertexSet {
        VertexSet::union_all(self.pairs.iter().map(|p| &p.a))
    }

    pub fn v2(&self) -> VertexSet {
        VertexSet::union_all(self.pairs.iter().map(|p| &p.b))
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.v1().union(&self.v2())
    }

    /// Sum of the side sizes; equals |V(N)| for a valid matching.
    pub fn vertex_count(&self) -> usize {
        self.pairs.iter().map(|p| p.a.len() + p.b.len()).sum()
    }

    pub fn accessors(&self) -> Accessors {
        let v1 = self.v1();
        let v2 = self.v2();
        Accessors {
            v: v1.union(&v2),
            v1,
            v2,
            first_sets: self.pairs.iter().map(|p| p.a.clone()).collect(),
            second_sets: self.pairs.iter().map(|p| p.b.clone()).collect(),
        }
    }

    pub fn reversed(&self) -> RegularizedMatching {
        RegularizedMatching { pairs: self.pairs.iter().map(SetPair::reversed).collect(), ..self.clone() }
    }

    /// Pairs not listed in `other`.
    pub fn minus(&self, other: &RegularizedMatching) -> RegularizedMatching {
        let pairs = self.pairs.iter().filter(|p| !other.pairs.contains(p)).cloned().collect();
        RegularizedMatching { pairs, ..self.clone() }
    }

    /// Edges of G running inside some pair.
    pub fn matching_edges(&self, g: &Graph) -> usize {
        self.pairs.iter().map(|p| g.e_between(&p.a, &p.b)).sum()
    }
}

/// Every pair of `inner` sits inside some pair of `outer`, orientation kept.
pub fn absorbs(outer: &RegularizedMatching, inner: &RegularizedMatching) -> bool {
    inner.pairs.iter().all(|p| outer.pairs.iter().any(|q| p.a.is_subset(&q.a) && p.b.is_subset(&q.b)))
}

/// Every pair of `inner` sits inside the two sides of some spot, in
/// either orientation.
pub fn spots_absorb(spots: &[DenseSpot], inner: &RegularizedMatching) -> bool {
    inner.pairs.iter().all(|p| {
        spots
            .iter()
            .any(|s| (p.a.is_subset(&s.u) && p.b.is_subset(&s.w)) || (p.a.is_subset(&s.w) && p.b.is_subset(&s.u)))
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PairVerdict {
    pub index: usize,
    pub sizes_ok: bool,
    pub density_ok: bool,
    pub verdict: RegularityVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingVerdict {
    pub valid: bool,
    pub sizes_ok: bool,
    pub disjoint: bool,
    pub regular: bool,
    /// A vertex lying in two of the sets, with the two pair indices.
    pub overlap: Option<(usize, usize, usize)>,
    pub pairs: Vec<PairVerdict>,
    pub mode: CertMode,
}

/// Checks equal side sizes of at least ell, pairwise disjointness of all
/// sets, and eps-regularity with density at least d of each pair.
pub fn verify_regularized_matching(
    g: &Graph,
    matching: &RegularizedMatching,
    eps: &Rational,
    d: &Rational,
    ell: usize,
    opts: &CertifyOptions,
) -> Result<MatchingVerdict> {
    let mut owner = vec![usize::MAX; g.n()];
    let mut overlap = None;
    for (i, p) in matching.pairs.iter().enumerate() {
        for &v in p.a.iter().chain(p.b.iter()) {
            if v >= g.n() {
                return Err(Error::Input(format!("matching vertex {v} out of range")));
            }
            if owner[v] != usize::MAX && overlap.is_none() {
                overlap = Some((v, owner[v], i));
            }
            owner[v] = i;
        }
    }
    let mut pairs = Vec::with_capacity(matching.len());
    let mut mode = CertMode::Exhaustive;
    for (index, p) in matching.pairs.iter().enumerate() {
        let sizes_ok = p.a.len() == p.b.len() && p.a.len() >= ell.max(1);
        if p.a.is_empty() || p.b.is_empty() {
            return Err(Error::Input(format!("pair {index} has an empty side")));
        }
        let verdict = certify_regular(g, &p.a, &p.b, eps, opts)?;
        if verdict.mode == CertMode::Heuristic {
            mode = CertMode::Heuristic;
        }
        pairs.push(PairVerdict { index, sizes_ok, density_ok: &verdict.density >= d, verdict });
    }
    let sizes_ok = pairs.iter().all(|p| p.sizes_ok);
    let regular = pairs.iter().all(|p| p.density_ok && p.verdict.regular);
    let disjoint = overlap.is_none();
    Ok(MatchingVerdict { valid: sizes_ok && regular && disjoint, sizes_ok, disjoint, regular, overlap, pairs, mode })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterBound {
    pub ok: bool,
    pub max_degree: usize,
    /// Largest |C| d over all sets C of the matching.
    #[serde(with = "crate::rational::serde_rational")]
    pub worst: Rational,
}

/// Checks |C| d ≤ maxdeg(host) for every set of the matching.
pub fn check_cluster_size_bound(host: &Graph, matching: &RegularizedMatching, d: &Rational) -> ClusterBound {
    let max_degree = host.max_degree();
    let worst =
        matching.pairs.iter().flat_map(|p| [p.a.len(), p.b.len()]).map(|s| int(s) * d).max().unwrap_or_else(|| int(0));
    ClusterBound { ok: worst <= int(max_degree), max_degree, worst }
}
