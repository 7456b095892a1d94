//! Independent re-checks of a rough-structure output, the K1 / K2
//! dichotomy, the consistency chain behind it and the hypothesis report.

use serde::{Deserialize, Serialize};

use crate::dense::{captured_graph, verify_sparse_decomposition, SparseDecomposition, VerifyOptions};
use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::lks::{check_lks_small_membership, classify_ls};
use crate::matching::{RegularizedMatching, SetPair};
use crate::rational::{int, rat, Rational};

use super::classes::{compute_s0, compute_xtriple};
use super::cluster::cluster_graph;
use super::pipeline::{pairs_inside, pairs_meeting, Dichotomy, StructureOutput};

/// Verdict of one assertion, with the measured value, its bound and the
/// slack bound - value when numeric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssertionVerdict {
    pub name: String,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl AssertionVerdict {
    fn set(name: &str, witness: Option<String>) -> AssertionVerdict {
        AssertionVerdict { name: name.into(), ok: witness.is_none(), value: None, bound: None, slack: None, witness }
    }

    /// value ≤ bound, or value < bound when `strict`.
    fn numeric(name: &str, value: Rational, bound: Rational, strict: bool) -> AssertionVerdict {
        let ok = if strict { value < bound } else { value <= bound };
        AssertionVerdict {
            name: name.into(),
            ok,
            slack: Some((&bound - &value).to_string()),
            value: Some(value.to_string()),
            bound: Some(bound.to_string()),
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct StructureReport {
    pub assertions: Vec<AssertionVerdict>,
    pub k1: bool,
    pub k2: bool,
    pub dichotomy: Dichotomy,
    /// Every assertion passes and the dichotomy is not NEITHER.
    pub ok: bool,
}

impl StructureReport {
    pub fn assertion(&self, name: &str) -> Option<&AssertionVerdict> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

fn all_pairs<'a>(ma: &'a RegularizedMatching, mb: &'a RegularizedMatching) -> impl Iterator<Item = &'a SetPair> {
    ma.pairs.iter().chain(&mb.pairs)
}

fn first_overlap(ma: &RegularizedMatching, mb: &RegularizedMatching) -> Option<String> {
    let mut seen = VertexSet::new();
    for (i, p) in all_pairs(ma, mb).enumerate() {
        let vs = p.vertices();
        let common = vs.intersection(&seen);
        if let Some(v) = common.first() {
            return Some(format!("vertex {v} repeats at pair {i}"));
        }
        if !p.a.is_disjoint(&p.b) {
            return Some(format!("pair {i} has overlapping sides"));
        }
        seen = seen.union(&vs);
    }
    None
}

fn cluster_index(clusters: &[VertexSet], set: &VertexSet) -> Option<usize> {
    clusters.iter().position(|c| set.is_subset(c))
}

/// Re-checks assertions (a)–(h) and the derived sets of `output` from
/// raw sets.
pub fn verify_structure(
    g: &Graph,
    nabla: &SparseDecomposition,
    eta: &Rational,
    output: &StructureOutput,
) -> Result<StructureReport> {
    let n = g.n();
    let k = nabla.params.k;
    let kn = int(k) * int(n);
    let (large, small) = classify_ls(g, k, eta)?;
    let s0 = compute_s0(g, nabla, eta)?;
    let captured = captured_graph(g, nabla);
    let greg = nabla.greg_graph(n);
    let (ma, mb) = (&output.ma, &output.mb);
    let (va, vb) = (ma.vertex_set(), mb.vertex_set());
    let mut out = Vec::new();

    out.push(AssertionVerdict::set("a", first_overlap(ma, mb)));

    let b_witness = mb.v1().difference(&s0).first().map(|v| format!("vertex {v} of V1(MB) is outside S0"));
    out.push(AssertionVerdict::set("b", b_witness));

    let c_witness = all_pairs(ma, mb).enumerate().find_map(|(i, p)| {
        if !nabla.spots.iter().any(|s| s.holds_pair(&p.a, &p.b)) {
            return Some(format!("pair {i} lies in no spot"));
        }
        let pure = |x: &VertexSet| x.is_subset(&small) || x.is_subset(&large);
        (!(pure(&p.a) && pure(&p.b))).then(|| format!("pair {i} has a side meeting both S and L"))
    });
    out.push(AssertionVerdict::set("c", c_witness));

    let large_avoiding = large.intersection(&nabla.avoiding);
    let d_witness = all_pairs(ma, mb).enumerate().find_map(|(i, p)| {
        if cluster_index(&nabla.clusters, &p.a).is_none() {
            return Some(format!("first side of pair {i} lies in no cluster"));
        }
        (!p.b.is_subset(&large_avoiding) && cluster_index(&nabla.clusters, &p.b).is_none())
            .then(|| format!("second side of pair {i} lies in no cluster and leaves L ∩ E"))
    });
    out.push(AssertionVerdict::set("d", d_witness));

    let triple = compute_xtriple(g, nabla, eta, ma, mb)?;
    out.push(AssertionVerdict::set(
        "triple",
        (triple != output.triple).then(|| "stored XA / XB / XC differ from the recount".to_string()),
    ));
    let xa = &triple.xa;

    out.push(AssertionVerdict::numeric(
        "e",
        int(captured.e_between(xa, &s0.difference(&va))),
        &nabla.params.gamma * &kn,
        false,
    ));

    let uncovered = g.vertices().difference(&va.union(&vb));
    let f_bound = &output.epsilon * &nabla.params.omega_star * &kn;
    out.push(AssertionVerdict::numeric("f", int(greg.e_within(&uncovered)), f_bound.clone(), false));

    let n_e = pairs_meeting(ma, mb, &nabla.avoiding);
    let mut g_verdict =
        AssertionVerdict::numeric("g", int(greg.e_between(&uncovered, &n_e.vertex_set())), f_bound, false);
    if n_e != output.n_e {
        g_verdict.ok = false;
        g_verdict.witness = Some("stored Ncal differs from the recount".into());
    }
    out.push(g_verdict);

    let k1_value = int(2 * g.e_within(xa) + g.e_between(xa, &triple.xb));
    let k1 = k1_value >= eta * &kn / int(3);
    let mgood = pairs_inside(ma, xa);
    let k2 = int(mgood.vertex_count()) >= eta * int(n) / int(3);
    let cg = cluster_graph(nabla, n);
    let h_witness = if mgood != output.mgood {
        Some("stored Mgood differs from the recount".to_string())
    } else {
        mgood.pairs.iter().enumerate().find_map(|(i, p)| {
            match (cluster_index(&nabla.clusters, &p.a), cluster_index(&nabla.clusters, &p.b)) {
                (Some(x), Some(y)) if cg.has_edge(x, y) => None,
                _ => Some(format!("Mgood pair {i} is not a cluster-graph edge")),
            }
        })
    };
    let mut h = AssertionVerdict::set("h", h_witness);
    h.ok &= k1 || k2;
    h.value = Some(format!(
        "K1 {k1_value} vs {}, K2 {} vs {}",
        eta * &kn / int(3),
        mgood.vertex_count(),
        eta * int(n) / int(3)
    ));
    out.push(h);

    let dichotomy = Dichotomy::from_flags(k1, k2);
    let ok = out.iter().all(|a| a.ok) && dichotomy != Dichotomy::Neither;
    Ok(StructureReport { assertions: out, k1, k2, dichotomy, ok })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidatorReport {
    /// Links of the counting chain in order.
    pub links: Vec<AssertionVerdict>,
    pub first_failure: Option<String>,
    /// Every link held, so the chain closes on an impossible inequality.
    pub contradiction: bool,
    /// Always false: an output without K1 or K2 is never accepted.
    pub accepted: bool,
}

/// Recomputes the counting chain that rules out an output satisfying
/// neither K1 nor K2, term by term, and names the first failing link.
pub fn validate_neither(g: &Graph, nabla: &SparseDecomposition, output: &StructureOutput) -> Result<ValidatorReport> {
    let n = g.n();
    let k = nabla.params.k;
    let kn = int(k) * int(n);
    let eta = &output.eta;
    let (large, small) = classify_ls(g, k, eta)?;
    let s0 = compute_s0(g, nabla, eta)?;
    let captured = captured_graph(g, nabla);
    let triple = compute_xtriple(g, nabla, eta, &output.ma, &output.mb)?;
    let (xa, xb, xc) = (&triple.xa, &triple.xb, &triple.xc);
    let va = output.ma.vertex_set();
    let vab = va.union(&output.mb.vertex_set());
    let per = (int(1) + eta) * int(k);
    let eta_kn = eta * &kn;
    let degree_sum: usize = xa.iter().map(|&v| g.degree(v)).sum();
    let e_or_m = nabla.avoiding.union(&output.lifted_m.vertex_set());
    let sr = &output.sr_vertices;

    let links = vec![
        AssertionVerdict::numeric("degree_sum", &per * int(xa.len()), int(degree_sum), false),
        AssertionVerdict::numeric("capture_deficit", int(2 * (g.m() - captured.m())), &eta_kn / int(3), false),
        AssertionVerdict::numeric(
            "captured_not_k1",
            int(2 * captured.e_within(xa) + captured.e_between(xa, xb)),
            &eta_kn / int(3),
            true,
        ),
        AssertionVerdict::numeric(
            "xa_xc",
            int(captured.e_between(xa, xc)),
            int(s0.difference(&vab).len()) * &per,
            false,
        ),
        AssertionVerdict::numeric(
            "sr_cross_zero",
            int(captured.e_between(&large.difference(&e_or_m), sr)),
            int(0),
            false,
        ),
        AssertionVerdict::numeric(
            "sr_separated",
            int(captured.e_between(&xa.intersection(&e_or_m), &sr.difference(&va))),
            &eta_kn / int(2),
            true,
        ),
        AssertionVerdict::numeric(
            "xa_s",
            int(captured.e_between(xa, &small)),
            int(small.intersection(&va).len()) * &per
                + int(small.difference(&s0.union(&vab)).len()) * &per
                + &eta_kn / int(2),
            false,
        ),
        AssertionVerdict::numeric(
            "matched_small",
            int(small.intersection(&va).len()),
            int(xa.intersection(&va).len()),
            false,
        ),
        AssertionVerdict::numeric(
            "unmatched_small",
            int(small.difference(&vab).len()) + int(2) * eta * int(n),
            int(xa.difference(&va).len()) + eta * int(n) / int(3),
            true,
        ),
        AssertionVerdict::numeric(
            "closing_sum",
            int(degree_sum),
            rat(7, 6) * &eta_kn + int(small.difference(&vab).len()) * &per + int(xa.intersection(&va).len()) * &per,
            false,
        ),
    ];
    let first_failure = links.iter().find(|l| !l.ok).map(|l| l.name.clone());
    Ok(ValidatorReport { contradiction: first_failure.is_none(), first_failure, links, accepted: false })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub lks_small: bool,
    pub lks_violations: usize,
    pub decomposition_ok: bool,
    pub decomposition_failures: Vec<String>,
    /// e(G) - e(G_∇).
    pub capture_deficit: usize,
    pub capture_bound: String,
    pub capture_ok: bool,
    /// Omega** > max(2, Omega*).
    pub omega_ok: bool,
    /// Every structural hypothesis holds.
    pub compliant: bool,
    /// gamma < eta / 3.
    pub gamma_in_regime: bool,
    /// epsilon < gamma^2 eta / 12.
    pub epsilon_in_regime: bool,
}

/// Structural hypotheses of the pipeline, with the asymptotic parameter
/// regime reported separately.
pub fn check_hypotheses(
    g: &Graph,
    nabla: &SparseDecomposition,
    eta: &Rational,
    epsilon: &Rational,
    opts: &VerifyOptions,
) -> Result<HypothesisReport> {
    let n = g.n();
    let p = &nabla.params;
    let lks = check_lks_small_membership(g, n, p.k, eta)?;
    let decomposition = verify_sparse_decomposition(g, &[lks.large.clone(), lks.small.clone()], nabla, opts)?;
    let capture_deficit = g.m() - captured_graph(g, nabla).m();
    let capture_bound = eta * int(p.k) * int(n) / int(6);
    let capture_ok = int(capture_deficit) <= capture_bound;
    let omega_ok = p.omega_star_star > int(2) && p.omega_star_star > p.omega_star;
    Ok(HypothesisReport {
        lks_small: lks.member,
        lks_violations: lks.violations.len(),
        decomposition_ok: decomposition.ok,
        decomposition_failures: decomposition.checks.iter().filter(|c| !c.ok).map(|c| c.property.clone()).collect(),
        capture_deficit,
        capture_bound: capture_bound.to_string(),
        capture_ok,
        omega_ok,
        compliant: lks.member && decomposition.ok && capture_ok && omega_ok,
        gamma_in_regime: p.gamma < eta / int(3),
        epsilon_in_regime: epsilon < &(&p.gamma * &p.gamma * eta / int(12)),
    })
}
