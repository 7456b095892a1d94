//! Iterated augmentation ending in a partition of the final matching
//! with few crossing edges.

use num_bigint::BigInt;
use serde::Serialize;

use crate::dense::DenseSpot;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::matching::{spots_absorb, RegularizedMatching};
use crate::params::{lemma46_tau_prime, separation_rounds};
use crate::rational::{int, Rational};
use crate::regularity::CertifyOptions;

use super::step::{augment_or_separate, pairs_nest, AugmentOutcome, AugmentParams};

#[derive(Debug, Clone)]
pub struct SeparateParams {
    pub omega: Rational,
    pub k: usize,
    pub rho: Rational,
    pub eps: Rational,
    /// Leftover ensemble sets smaller than this are dropped.
    pub min_set: usize,
    /// Regularity of extracted pairs; defaults to the cube of each
    /// round's epsilon.
    pub inner_eps: Option<Rational>,
    pub pair_density: Option<Rational>,
    pub min_pair: usize,
    pub certify: CertifyOptions,
}

impl SeparateParams {
    pub fn new(omega: Rational, k: usize, rho: Rational, eps: Rational) -> SeparateParams {
        SeparateParams {
            omega,
            k,
            rho,
            eps,
            min_set: 1,
            inner_eps: None,
            pair_density: None,
            min_pair: 1,
            certify: CertifyOptions::default(),
        }
    }

    /// Parameters of round `i`: tau = rho / 2 and epsilon eps / 2^(i+1).
    pub fn round(&self, i: usize) -> Result<AugmentParams> {
        let tau = &self.rho / int(2);
        let eps = &self.eps / Rational::from_integer(BigInt::from(2u8).pow(i as u32 + 1));
        let mut p = AugmentParams::desk(self.omega.clone(), self.k, tau, self.rho.clone(), eps)?;
        if let Some(e) = &self.inner_eps {
            p.inner_eps = e.clone();
        }
        if let Some(d) = &self.pair_density {
            p.pair_density = d.clone();
        }
        p.min_pair = self.min_pair;
        p.certify = self.certify.clone();
        Ok(p)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundRecord {
    pub round: usize,
    pub vertices: usize,
    pub lost: usize,
    pub gain: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationChecks {
    /// |V(M) - V(M')| ≤ eps n.
    pub i: bool,
    /// Every pair of M' nests in V1(M) ∪ C, V2(M) ∪ {Y} and a spot.
    pub ii: bool,
    /// Crossing edges below rho k n.
    pub iii: bool,
    pub lost: usize,
    pub crossing_edges: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub crossing_bound: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationResult {
    #[serde(rename = "Mprime")]
    pub m_prime: RegularizedMatching,
    #[serde(rename = "M1")]
    pub m1: RegularizedMatching,
    #[serde(rename = "M2")]
    pub m2: RegularizedMatching,
    pub rounds: Vec<RoundRecord>,
    /// ceil(2 / tau') + 1 as a decimal string.
    pub round_bound: String,
    pub verified: SeparationChecks,
}

/// Recounts the three separation properties from raw sets.
#[allow(clippy::too_many_arguments)]
pub fn verify_separation(
    g: &Graph,
    spots: &[DenseSpot],
    matching: &RegularizedMatching,
    target: &[VertexSet],
    y: &VertexSet,
    result: &SeparationResult,
    rho: &Rational,
    eps: &Rational,
    k: usize,
) -> SeparationChecks {
    let n = g.n();
    let lost = matching.vertex_set().difference(&result.m_prime.vertex_set()).len();
    let firsts: Vec<VertexSet> = matching.pairs.iter().map(|p| p.a.clone()).chain(target.iter().cloned()).collect();
    let seconds: Vec<VertexSet> = matching.pairs.iter().map(|p| p.b.clone()).chain([y.clone()]).collect();
    let partition_ok = {
        let mut all = result.m1.pairs.clone();
        all.extend(result.m2.pairs.iter().cloned());
        let mut expected = result.m_prime.pairs.clone();
        all.sort_by(|a, b| (&a.a, &a.b).cmp(&(&b.a, &b.b)));
        expected.sort_by(|a, b| (&a.a, &a.b).cmp(&(&b.a, &b.b)));
        all == expected
    };
    let left = VertexSet::union_all(target).union(&matching.v1()).difference(&result.m1.v1());
    let right = y.union(&matching.v2()).difference(&result.m2.v2());
    let crossing_edges = g.e_between(&left, &right);
    let crossing_bound = rho * int(k) * int(n);
    SeparationChecks {
        i: int(lost) <= eps * int(n),
        ii: pairs_nest(&result.m_prime, &firsts, &seconds, spots),
        iii: partition_ok && int(crossing_edges) < crossing_bound,
        lost,
        crossing_edges,
        crossing_bound,
    }
}

/// Augments `matching` round by round (round i uses epsilon eps / 2^(i+1)
/// so the total loss stays below eps n) until a round separates.
pub fn separate(
    g: &Graph,
    spots: &[DenseSpot],
    matching: &RegularizedMatching,
    target: &[VertexSet],
    y: &VertexSet,
    params: &SeparateParams,
) -> Result<SeparationResult> {
    let omega = &params.omega;
    if !(params.rho > int(0) && &params.rho * omega < int(1)) {
        return Err(Error::Domain(format!("rho must lie in (0, 1/Omega), got {}", params.rho)));
    }
    let vm = matching.vertex_set();
    let c_union = VertexSet::union_all(target);
    if !c_union.is_disjoint(&vm) {
        return Err(Error::Precondition("the ensemble meets V(M)".into()));
    }
    if !y.is_disjoint(&vm.union(&c_union)) {
        return Err(Error::Precondition("Y meets V(M) or the ensemble".into()));
    }
    if !spots_absorb(spots, matching) {
        return Err(Error::Precondition("the spots do not absorb the matching".into()));
    }
    let tau_prime = lemma46_tau_prime(omega, &(&params.rho / int(2)))?;
    let bound = separation_rounds(&tau_prime)?;
    let originals: Vec<VertexSet> = matching.pairs.iter().map(|p| p.a.clone()).chain(target.iter().cloned()).collect();
    let mut current = matching.clone();
    let mut rounds = Vec::new();
    let mut round = 0usize;
    let (m1, m2) = loop {
        if BigInt::from(round) >= bound {
            return Err(Error::Invariant(format!("separation did not finish within {bound} rounds")));
        }
        let round_params = params.round(round)?;
        let v1 = current.v1();
        let vc = current.vertex_set();
        let v2 = current.v2();
        let mut y_parts: Vec<VertexSet> = vec![y.difference(&v2)];
        y_parts.extend(matching.pairs.iter().map(|p| p.b.difference(&v2)));
        y_parts.retain(|p| !p.is_empty());
        let leftover: Vec<VertexSet> = originals
            .iter()
            .filter(|c| c.difference(&v1).len() >= params.min_set.max(1))
            .map(|c| c.difference(&vc))
            .collect();
        let outcome =
            augment_or_separate(g, spots, &current, &y_parts, &leftover, &round_params).map_err(|e| match e {
                Error::NoPairFound(m) => Error::NoPairFound(format!("round {round}: {m}")),
                other => other,
            })?;
        match outcome {
            AugmentOutcome::Separated { pairs, .. } => {
                let mut m1 = RegularizedMatching::default();
                let mut m2 = RegularizedMatching::default();
                for (i, p) in current.pairs.iter().enumerate() {
                    if pairs.contains(&i) { &mut m1 } else { &mut m2 }.pairs.push(p.clone());
                }
                break (m1, m2);
            }
            AugmentOutcome::Improved(imp) => {
                if imp.gain <= 0 {
                    return Err(Error::Invariant(format!("round {round} did not grow the matching")));
                }
                rounds.push(RoundRecord {
                    round,
                    vertices: imp.matching.vertex_count(),
                    lost: imp.lost,
                    gain: imp.gain,
                });
                current = imp.matching;
            }
        }
        round += 1;
    };
    let mut result = SeparationResult {
        m_prime: current,
        m1,
        m2,
        rounds,
        round_bound: bound.to_string(),
        verified: SeparationChecks {
            i: false,
            ii: false,
            iii: false,
            lost: 0,
            crossing_edges: 0,
            crossing_bound: int(0),
        },
    };
    result.verified = verify_separation(g, spots, matching, target, y, &result, &params.rho, &params.eps, params.k);
    Ok(result)
}
