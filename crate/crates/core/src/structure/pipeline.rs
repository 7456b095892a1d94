//! The rough-structure pipeline: cluster-graph stage, lifting, separation
//! and assembly of the two output matchings.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::augment::{separate, SeparateParams};
use crate::dense::spot::union_graph;
use crate::dense::{SparseDecomposition, VerifyOptions};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexSet};
use crate::lks::classify_ls;
use crate::matching::{RegularizedMatching, SetPair};
use crate::rational::{ceil_usize, int, Rational};
use crate::regularity::CertifyOptions;

use super::classes::{compute_s0, compute_xtriple, XTriple};
use super::cluster::{
    build_sr, choose_separator_pair, cluster_graph, extend_to_n1, ClosureReport, ClusterClasses, SeparatorPair,
};
use super::verify::{
    check_hypotheses, validate_neither, verify_structure, HypothesisReport, StructureReport, ValidatorReport,
};

#[derive(Debug, Clone)]
pub struct StructureParams {
    pub eta: Rational,
    /// Loss budget of the separation and the (f)/(g) bounds.
    pub epsilon: Rational,
    /// Spot degree multiplier; defaults to max(1, ceil(maxdeg(G_D) / k)).
    pub omega: Option<usize>,
    pub min_pair: usize,
    pub inner_eps: Option<Rational>,
    pub pair_density: Option<Rational>,
    pub certify: CertifyOptions,
    /// Run the hypothesis checks, including the decomposition verifier.
    pub check_hypotheses: bool,
    pub verify: VerifyOptions,
}

impl StructureParams {
    pub fn new(eta: Rational, epsilon: Rational) -> StructureParams {
        StructureParams {
            eta,
            epsilon,
            omega: None,
            min_pair: 1,
            inner_eps: None,
            pair_density: None,
            certify: CertifyOptions::default(),
            check_hypotheses: true,
            verify: VerifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Dichotomy {
    K1,
    K2,
    Both,
    #[default]
    Neither,
}

impl Dichotomy {
    pub fn from_flags(k1: bool, k2: bool) -> Dichotomy {
        match (k1, k2) {
            (true, true) => Dichotomy::Both,
            (true, false) => Dichotomy::K1,
            (false, true) => Dichotomy::K2,
            (false, false) => Dichotomy::Neither,
        }
    }
}

/// State of the cluster-graph stage.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterGraphState {
    pub cluster_edges: Vec<Edge>,
    pub classes: ClusterClasses,
    pub separator: SeparatorPair,
    pub closure: ClosureReport,
    #[serde(rename = "N1")]
    pub n1: Vec<Edge>,
    pub uncovered_independent: bool,
    /// N0 edges with the partner in SR, as (Q cluster, SR cluster).
    #[serde(rename = "M")]
    pub m: Vec<Edge>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparationSummary {
    pub rounds: usize,
    /// Decimal digits of the round bound ceil(2 / tau') + 1.
    pub round_bound_digits: usize,
    pub rounds_within_bound: bool,
    pub lost: usize,
    pub crossing_edges: usize,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureOutput {
    #[serde(with = "crate::rational::serde_rational")]
    pub eta: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub epsilon: Rational,
    pub omega: usize,
    #[serde(rename = "MA")]
    pub ma: RegularizedMatching,
    #[serde(rename = "MB")]
    pub mb: RegularizedMatching,
    pub triple: XTriple,
    /// Pairs of MA ∪ MB meeting the avoiding set.
    #[serde(rename = "Ncal")]
    pub n_e: RegularizedMatching,
    #[serde(rename = "Mgood")]
    pub mgood: RegularizedMatching,
    /// The lifted matching fed to the separation.
    #[serde(rename = "M")]
    pub lifted_m: RegularizedMatching,
    /// Union of the SR clusters.
    #[serde(rename = "SR")]
    pub sr_vertices: VertexSet,
    pub separation: SeparationSummary,
    pub dichotomy: Dichotomy,
    pub report: StructureReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validator: Option<ValidatorReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<HypothesisReport>,
    /// All assertions pass and the dichotomy holds.
    pub accepted: bool,
}

/// Lifted cluster edge: Q clusters go second, otherwise the cluster with
/// the smaller least vertex goes first.
fn lift_edge(nabla: &SparseDecomposition, q: &VertexSet, (x, y): Edge) -> SetPair {
    let (cx, cy) = (&nabla.clusters[x], &nabla.clusters[y]);
    let x_first = if q.contains(y) {
        true
    } else if q.contains(x) {
        false
    } else {
        cx.first() < cy.first()
    };
    if x_first {
        SetPair::new(cx.clone(), cy.clone())
    } else {
        SetPair::new(cy.clone(), cx.clone())
    }
}

/// Pairs of `matching` with both sides inside `set`.
pub fn pairs_inside(matching: &RegularizedMatching, set: &VertexSet) -> RegularizedMatching {
    RegularizedMatching::new(
        matching.pairs.iter().filter(|p| p.a.is_subset(set) && p.b.is_subset(set)).cloned().collect(),
    )
}

/// Pairs of MA ∪ MB with a vertex in `set`.
pub fn pairs_meeting(ma: &RegularizedMatching, mb: &RegularizedMatching, set: &VertexSet) -> RegularizedMatching {
    RegularizedMatching::new(
        ma.pairs.iter().chain(&mb.pairs).filter(|p| !p.vertices().is_disjoint(set)).cloned().collect(),
    )
}

/// Default spot degree multiplier: max(1, ceil(maxdeg(G_D) / k)).
pub fn default_omega(spot_graph: &Graph, k: usize) -> usize {
    ceil_usize(&Rational::new(spot_graph.max_degree().into(), k.max(1).into())).max(1)
}

/// Everything the separation step consumes.
#[derive(Debug, Clone)]
pub struct SeparationInput {
    pub state: ClusterGraphState,
    /// G_D, the union of the spots.
    pub spot_graph: Graph,
    pub lifted_m: RegularizedMatching,
    /// Lifted N1 edges outside M.
    pub n1_rest: Vec<SetPair>,
    /// SR clusters missed by N1.
    pub target: Vec<VertexSet>,
    /// Large avoiding vertices outside every cluster.
    pub y: VertexSet,
    pub params: SeparateParams,
}

/// Runs the cluster-graph stage, checks its claims and lifts the result.
pub fn separation_input(g: &Graph, nabla: &SparseDecomposition, params: &StructureParams) -> Result<SeparationInput> {
    let n = g.n();
    let k = nabla.params.k;
    let (large, _) = classify_ls(g, k, &params.eta)?;
    let state = cluster_stage(g, nabla, &params.eta)?;
    let (separator, closure) = (&state.separator, &state.closure);
    if !closure.claim_sr_isolated {
        return Err(Error::Invariant(format!(
            "SR closure {:?} leaves the isolated S0 class {:?}",
            closure.sr.as_slice(),
            closure.isolated.as_slice()
        )));
    }
    if !(closure.q_partner_s0 && closure.q_partner_other) {
        return Err(Error::Invariant("a Q cluster matched outside SR is adjacent to SR".into()));
    }
    if !state.uncovered_independent {
        return Err(Error::Invariant("two clusters missed by N1 are adjacent".into()));
    }
    let lifted_m = RegularizedMatching::new(
        state.m.iter().map(|&(q, c)| SetPair::new(nabla.clusters[c].clone(), nabla.clusters[q].clone())).collect(),
    );
    let n1_rest: Vec<SetPair> = state
        .n1
        .iter()
        .filter(|&&(a, b)| !state.m.iter().any(|&(q, c)| (q, c) == (a, b) || (c, q) == (a, b)))
        .map(|&e| lift_edge(nabla, &separator.q, e))
        .collect();
    let n1_covered: VertexSet = state.n1.iter().flat_map(|&(a, b)| [a, b]).collect();
    let target: Vec<VertexSet> =
        closure.sr.difference(&n1_covered).iter().map(|&c| nabla.clusters[c].clone()).collect();
    let y = large.intersection(&nabla.avoiding).difference(&nabla.cluster_union());
    let spot_graph = union_graph(n, &nabla.spots);
    let omega = params.omega.unwrap_or_else(|| default_omega(&spot_graph, k));
    let rho = &nabla.params.gamma * &nabla.params.gamma;
    let mut sep_params = SeparateParams::new(int(omega), k, rho, params.epsilon.clone());
    sep_params.min_pair = params.min_pair;
    sep_params.inner_eps = params.inner_eps.clone();
    sep_params.pair_density = params.pair_density.clone();
    sep_params.certify = params.certify.clone();
    Ok(SeparationInput { state, spot_graph, lifted_m, n1_rest, target, y, params: sep_params })
}

/// Runs the full pipeline and re-verifies its output.
pub fn rough_structure(g: &Graph, nabla: &SparseDecomposition, params: &StructureParams) -> Result<StructureOutput> {
    nabla.validate_shape(g)?;
    let eta = &params.eta;
    let input = separation_input(g, nabla, params)?;
    let sep = separate(&input.spot_graph, &nabla.spots, &input.lifted_m, &input.target, &input.y, &input.params)?;
    let omega = ceil_usize(&input.params.omega);
    let SeparationInput { state, lifted_m, n1_rest, .. } = input;
    let closure = &state.closure;

    let mut ma_pairs = n1_rest;
    ma_pairs.extend(sep.m1.pairs.iter().cloned());
    let ma = RegularizedMatching::new(ma_pairs);
    let mb = sep.m2.clone();
    let triple = compute_xtriple(g, nabla, eta, &ma, &mb)?;
    let mgood = pairs_inside(&ma, &triple.xa);
    let n_e = pairs_meeting(&ma, &mb, &nabla.avoiding);
    let sr_vertices = VertexSet::union_all(closure.sr.iter().map(|&c| &nabla.clusters[c]));
    let separation = SeparationSummary {
        rounds: sep.rounds.len(),
        round_bound_digits: sep.round_bound.len(),
        rounds_within_bound: sep.round_bound.parse::<BigInt>().is_ok_and(|b| BigInt::from(sep.rounds.len()) <= b),
        lost: sep.verified.lost,
        crossing_edges: sep.verified.crossing_edges,
        verified: sep.verified.i && sep.verified.ii && sep.verified.iii,
    };
    let mut output = StructureOutput {
        eta: eta.clone(),
        epsilon: params.epsilon.clone(),
        omega,
        ma,
        mb,
        triple,
        n_e,
        mgood,
        lifted_m,
        sr_vertices,
        separation,
        dichotomy: Dichotomy::Neither,
        report: StructureReport::default(),
        validator: None,
        hypotheses: None,
        accepted: false,
    };
    output.report = verify_structure(g, nabla, eta, &output)?;
    output.dichotomy = output.report.dichotomy;
    if output.dichotomy == Dichotomy::Neither {
        output.validator = Some(validate_neither(g, nabla, &output)?);
    }
    if params.check_hypotheses {
        output.hypotheses = Some(check_hypotheses(g, nabla, eta, &params.epsilon, &params.verify)?);
    }
    output.accepted = output.report.ok;
    Ok(output)
}

/// The cluster-graph stage alone, for inspection.
pub fn cluster_stage(g: &Graph, nabla: &SparseDecomposition, eta: &Rational) -> Result<ClusterGraphState> {
    nabla.validate_shape(g)?;
    let (large, small) = classify_ls(g, nabla.params.k, eta)?;
    let s0 = compute_s0(g, nabla, eta)?;
    let cg = cluster_graph(nabla, g.n());
    let classes = ClusterClasses::new(nabla, &small, &large, &s0)?;
    let separator = choose_separator_pair(&cg, &classes)?;
    let closure = build_sr(&cg, &separator, &classes);
    let extension = extend_to_n1(&cg, &separator, &classes)?;
    let m = separator.n0.iter().copied().filter(|&(_, c)| closure.sr.contains(c)).collect();
    Ok(ClusterGraphState {
        cluster_edges: cg.edges().to_vec(),
        classes,
        separator,
        closure,
        n1: extension.n1,
        uncovered_independent: extension.uncovered_independent,
        m,
    })
}
