//! The vertex classes of the rough structure: S0, the restricted degree
//! and the XA / XB / XC triple.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dense::SparseDecomposition;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::lks::classify_ls;
use crate::matching::RegularizedMatching;
use crate::rational::{int, Rational};

/// S0 = S - (V(G_exp) ∪ E).
pub fn compute_s0(g: &Graph, nabla: &SparseDecomposition, eta: &Rational) -> Result<VertexSet> {
    let (_, small) = classify_ls(g, nabla.params.k, eta)?;
    let expander = nabla.gexp_graph(g.n()).support();
    Ok(small.difference(&expander).difference(&nabla.avoiding))
}

/// S0 - V(MA ∪ MB): the targets counted by the restricted degree.
fn hat_targets(
    g: &Graph,
    nabla: &SparseDecomposition,
    eta: &Rational,
    ma: &RegularizedMatching,
    mb: &RegularizedMatching,
) -> Result<VertexSet> {
    let s0 = compute_s0(g, nabla, eta)?;
    Ok(s0.difference(&ma.vertex_set()).difference(&mb.vertex_set()))
}

/// Degree of `v` into S - (V(G_exp) ∪ E ∪ V(MA ∪ MB)).
pub fn hat_deg(
    g: &Graph,
    nabla: &SparseDecomposition,
    eta: &Rational,
    ma: &RegularizedMatching,
    mb: &RegularizedMatching,
    v: usize,
) -> Result<usize> {
    if v >= g.n() {
        return Err(Error::Input(format!("vertex {v} out of range")));
    }
    let targets = hat_targets(g, nabla, eta, ma, mb)?;
    Ok(g.deg_into(v, &targets.mask(g.n())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XTriple {
    #[serde(rename = "XA")]
    pub xa: VertexSet,
    #[serde(rename = "XB")]
    pub xb: VertexSet,
    #[serde(rename = "XC")]
    pub xc: VertexSet,
    /// Restricted degree of every large vertex.
    pub hat_degrees: BTreeMap<usize, usize>,
}

/// XA = L - V(MB); XB = large vertices of V(MB) with restricted degree
/// below (1 + eta) k / 2; XC = the remaining large vertices.
pub fn compute_xtriple(
    g: &Graph,
    nabla: &SparseDecomposition,
    eta: &Rational,
    ma: &RegularizedMatching,
    mb: &RegularizedMatching,
) -> Result<XTriple> {
    if !ma.vertex_set().is_disjoint(&mb.vertex_set()) {
        return Err(Error::Precondition("the two matchings share a vertex".into()));
    }
    let k = nabla.params.k;
    let (large, _) = classify_ls(g, k, eta)?;
    let targets = hat_targets(g, nabla, eta, ma, mb)?.mask(g.n());
    let hat_degrees: BTreeMap<usize, usize> = large.iter().map(|&v| (v, g.deg_into(v, &targets))).collect();
    let vmb = mb.vertex_set();
    let xa = large.difference(&vmb);
    let threshold = (int(1) + eta) * int(k);
    let xb: VertexSet =
        large.intersection(&vmb).iter().copied().filter(|v| int(2 * hat_degrees[v]) < threshold).collect();
    let xc = large.difference(&xa).difference(&xb);
    Ok(XTriple { xa, xb, xc, hat_degrees })
}
