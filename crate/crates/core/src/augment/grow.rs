//! Greedy growth of a regularized matching inside an instance.

use serde::Serialize;

use crate::dense::Instance;
use crate::error::{Error, Result};
use crate::matching::{RegularizedMatching, SetPair};
use crate::rational::{int, Rational};

use super::extract::{find_regular_pair_in_spot, ExtractOptions, PairFound};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum StopReason {
    /// The residual host has no edges left.
    ResidualEmpty,
    NoPairFound {
        detail: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowResult {
    pub matching: RegularizedMatching,
    /// One extraction record per pair, in order.
    pub extractions: Vec<PairFound>,
    /// e(A_H - V1(M), B_H - V2(M)) when the loop stopped.
    pub residual_edges: usize,
    /// (tau / 2) k n.
    #[serde(with = "crate::rational::serde_rational")]
    pub residual_threshold: Rational,
    pub residual_certificate: bool,
    /// |V(M)| ≥ (tau / (2 Omega)) n.
    pub size_bound_met: bool,
    pub stop: StopReason,
}

impl GrowResult {
    /// Either the size bound or the residual certificate holds.
    pub fn guarantee_met(&self) -> bool {
        self.size_bound_met || self.residual_certificate
    }
}

/// Repeatedly extracts a pair from the residual host H restricted to
/// A_H - V(M), B_H - V(M) until no pair is found. The exclusion
/// threshold of each extraction uses tau / 2; size and density floors
/// come from `opts`.
pub fn grow_matching(inst: &Instance<'_>, opts: &ExtractOptions) -> Result<GrowResult> {
    let g = inst.graph;
    let n = g.n();
    let p = &inst.params;
    let mut matching = RegularizedMatching::default();
    let mut extractions = Vec::new();
    let mut used = crate::graph::VertexSet::new();
    let half_tau = &p.tau / int(2);
    let stop = loop {
        let host = inst.host.restrict(&inst.host.a.difference(&used), &inst.host.b.difference(&used));
        if host.edge_count() == 0 {
            break StopReason::ResidualEmpty;
        }
        let mut residual = inst.clone();
        residual.host = host;
        residual.params.tau = half_tau.clone();
        match find_regular_pair_in_spot(&residual, opts) {
            Ok(found) => {
                used = used.union(&found.x).union(&found.y);
                matching.pairs.push(SetPair::new(found.x.clone(), found.y.clone()));
                extractions.push(found);
            }
            Err(Error::NoPairFound(detail)) => break StopReason::NoPairFound { detail },
            Err(e) => return Err(e),
        }
    };
    let residual_edges = inst
        .host
        .restrict(&inst.host.a.difference(&matching.v1()), &inst.host.b.difference(&matching.v2()))
        .edge_count();
    let residual_threshold = &half_tau * int(p.k) * int(n);
    let size_bound = &p.tau / (int(2) * &p.omega) * int(n);
    Ok(GrowResult {
        size_bound_met: int(matching.vertex_count()) >= size_bound,
        residual_certificate: int(residual_edges) < residual_threshold,
        residual_threshold,
        residual_edges,
        matching,
        extractions,
        stop,
    })
}
