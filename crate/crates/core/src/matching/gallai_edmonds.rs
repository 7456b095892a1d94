//! Factor-criticality and the separator-matching pair (Q, M): every
//! component of G - Q is factor-critical and M matches each vertex of Q
//! into a different component.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{norm_edge, Edge, Graph, VertexSet};

use super::blossom::{is_matching, mate_and_missable, maximum_mate};

/// A perfect matching of K - v for one vertex v.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearPerfect {
    pub removed: usize,
    pub matching: Vec<Edge>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorCriticalReport {
    pub factor_critical: bool,
    pub certificates: Vec<NearPerfect>,
    /// A vertex whose removal leaves no perfect matching.
    pub failing_vertex: Option<usize>,
}

/// Decides factor-criticality of the subgraph induced by `verts`, with a
/// certificate for every vertex when it holds.
pub fn factor_critical_within(g: &Graph, verts: &VertexSet) -> FactorCriticalReport {
    let (sub, map) = g.induced(verts);
    let mut certificates = Vec::with_capacity(verts.len());
    for i in 0..sub.n() {
        let without = sub.without_vertices(&VertexSet::from(vec![i]));
        let mate = maximum_mate(&without);
        let matched = mate.iter().filter(|m| m.is_some()).count();
        if matched + 1 != sub.n() {
            return FactorCriticalReport {
                factor_critical: false,
                certificates: Vec::new(),
                failing_vertex: Some(map[i]),
            };
        }
        let matching = mate
            .iter()
            .enumerate()
            .filter_map(|(a, m)| m.filter(|&b| a < b).map(|b| norm_edge(map[a], map[b])))
            .collect();
        certificates.push(NearPerfect { removed: map[i], matching });
    }
    FactorCriticalReport { factor_critical: true, certificates, failing_vertex: None }
}

/// Factor-criticality of the whole graph. K_1 is factor-critical.
pub fn is_factor_critical(g: &Graph) -> FactorCriticalReport {
    factor_critical_within(g, &g.vertices())
}

#[derive(Debug, Clone, Serialize)]
pub struct GallaiEdmonds {
    #[serde(rename = "Q")]
    pub q: VertexSet,
    /// Pairs (q, partner) with q in Q.
    #[serde(rename = "M")]
    pub m: Vec<Edge>,
    pub components: Vec<VertexSet>,
    pub certificates: Vec<Vec<NearPerfect>>,
    pub certified: bool,
}

/// Vertices missed by some maximum matching of the subgraph induced by
/// `verts`: v qualifies exactly when removing it keeps the matching number.
fn missable(g: &Graph, verts: &VertexSet) -> VertexSet {
    let (sub, map) = g.induced(verts);
    let (_, flags) = mate_and_missable(&sub);
    flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| map[i]).collect()
}

/// Splits `verts` into (D, A, C) with respect to the induced subgraph.
fn classes(g: &Graph, verts: &VertexSet) -> (VertexSet, VertexSet, VertexSet) {
    let d = missable(g, verts);
    let dmask = d.mask(g.n());
    let a: VertexSet =
        verts.iter().copied().filter(|&v| !dmask[v] && g.neighbors(v).iter().any(|&u| dmask[u])).collect();
    let c = verts.difference(&d).difference(&a);
    (d, a, c)
}

/// Builds (Q, M). Q starts as the canonical barrier A(G); each remaining
/// perfectly matchable component K contributes its smallest vertex v and
/// the barrier of K - v, recursing on what is still perfectly matchable.
pub fn gallai_edmonds(g: &Graph) -> Result<GallaiEdmonds> {
    let mate = maximum_mate(g);
    let all = g.vertices();
    let (_, a, c) = classes(g, &all);
    let mut q = a.clone();
    let mut m: Vec<Edge> = Vec::new();
    for &x in &a {
        let partner = mate[x].ok_or_else(|| Error::Invariant(format!("barrier vertex {x} exposed")))?;
        m.push((x, partner));
    }
    let mut work = g.components_within(&c);
    while let Some(k) = work.pop() {
        let v = k.first().ok_or_else(|| Error::Invariant("empty component".into()))?;
        let u = mate[v].ok_or_else(|| Error::Invariant(format!("vertex {v} of a matchable part exposed")))?;
        let rest = k.difference(&VertexSet::from(vec![v]));
        let (_, a2, c2) = classes(g, &rest);
        q.insert(v);
        m.push((v, u));
        for &x in &a2 {
            let partner = mate[x].ok_or_else(|| Error::Invariant(format!("vertex {x} exposed")))?;
            q.insert(x);
            m.push((x, partner));
        }
        work.extend(g.components_within(&c2));
    }
    m.sort_unstable();
    let outside = all.difference(&q);
    let components = g.components_within(&outside);
    let mut certificates = Vec::with_capacity(components.len());
    for comp in &components {
        let report = factor_critical_within(g, comp);
        if !report.factor_critical {
            return Err(Error::Invariant(format!("component {:?} not factor-critical", comp.as_slice())));
        }
        certificates.push(report.certificates);
    }
    Ok(GallaiEdmonds { q, m, components, certificates, certified: true })
}

#[derive(Debug, Clone, Serialize)]
pub struct GallaiEdmondsReport {
    pub sizes_match: bool,
    pub matching_valid: bool,
    pub distinct_components: bool,
    pub components_exact: bool,
    pub factor_critical: bool,
    pub ok: bool,
    pub failure: Option<String>,
}

/// Re-checks a (Q, M) pair and its certificates from scratch.
pub fn verify_gallai_edmonds(g: &Graph, ge: &GallaiEdmonds) -> GallaiEdmondsReport {
    let mut failure = None;
    let mut note = |ok: bool, what: &str| {
        if !ok && failure.is_none() {
            failure = Some(what.to_string());
        }
        ok
    };
    let sizes_match = note(ge.m.len() == ge.q.len(), "|M| != |Q|");
    let normalized: Vec<Edge> = ge.m.iter().map(|&(a, b)| norm_edge(a, b)).collect();
    let matching_valid = note(is_matching(g, &normalized), "M is not a matching of G");
    let outside = g.vertices().difference(&ge.q);
    let expected = g.components_within(&outside);
    let mut got = ge.components.clone();
    got.sort();
    let mut exp_sorted = expected.clone();
    exp_sorted.sort();
    let components_exact = note(got == exp_sorted, "components differ from those of G - Q");
    let comp_of = |v: usize| expected.iter().position(|c| c.contains(v));
    let mut used = vec![false; expected.len()];
    let mut distinct = true;
    for &(x, y) in &ge.m {
        let (qv, other) = if ge.q.contains(x) { (x, y) } else { (y, x) };
        if !ge.q.contains(qv) || ge.q.contains(other) {
            distinct = false;
            continue;
        }
        match comp_of(other) {
            Some(i) if !used[i] => used[i] = true,
            _ => distinct = false,
        }
    }
    let covered: VertexSet = ge.m.iter().flat_map(|&(a, b)| [a, b]).collect();
    distinct &= ge.q.is_subset(&covered);
    let distinct_components = note(distinct, "Q is not matched into distinct components");
    let mut fc = ge.certificates.len() == ge.components.len();
    for (comp, certs) in ge.components.iter().zip(&ge.certificates) {
        let removed: VertexSet = certs.iter().map(|c| c.removed).collect();
        fc &= removed == *comp;
        for cert in certs {
            let inside = cert
                .matching
                .iter()
                .all(|&(a, b)| comp.contains(a) && comp.contains(b) && a != cert.removed && b != cert.removed);
            fc &= inside && is_matching(g, &cert.matching) && 2 * cert.matching.len() + 1 == comp.len();
        }
    }
    let factor_critical = note(fc, "a component certificate is invalid");
    let ok = sizes_match && matching_valid && components_exact && distinct_components && factor_critical;
    GallaiEdmondsReport {
        sizes_match,
        matching_valid,
        distinct_components,
        components_exact,
        factor_critical,
        ok,
        failure,
    }
}
