//! Sparse and bounded decompositions: clusters, dense spots, the
//! regularized and expander parts, the avoiding set and the set of
//! huge-degree vertices, with independent verifiers for every property.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{norm_edge, Edge, Graph, VertexSet};
use crate::rational::{int, serde_rational, Rational};
use crate::regularity::{certify_regular, CertMode, CertifyOptions};

use super::avoiding::{check_avoiding, AvoidingOptions, AvoidingVerdict};
use super::spot::{edge_disjoint, is_dense_spot, search_dense_spot, DenseSpot, SpotSearchOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionParams {
    pub k: usize,
    #[serde(rename = "Omega_star_star", with = "serde_rational")]
    pub omega_star_star: Rational,
    #[serde(rename = "Omega_star", with = "serde_rational")]
    pub omega_star: Rational,
    #[serde(rename = "Lambda", with = "serde_rational")]
    pub lambda: Rational,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "serde_rational")]
    pub nu: Rational,
    #[serde(with = "serde_rational")]
    pub rho: Rational,
    /// Optional avoiding threshold.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_rational::option")]
    pub b: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseDecomposition {
    /// Vertices of huge degree.
    #[serde(rename = "H")]
    pub huge: VertexSet,
    pub clusters: Vec<VertexSet>,
    pub spots: Vec<DenseSpot>,
    pub greg: Vec<Edge>,
    pub gexp: Vec<Edge>,
    /// The avoiding set.
    #[serde(rename = "E")]
    pub avoiding: VertexSet,
    pub params: DecompositionParams,
}

impl SparseDecomposition {
    pub fn from_json(text: &str) -> Result<SparseDecomposition> {
        let mut d: SparseDecomposition = serde_json::from_str(text)?;
        d.normalise();
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serialises")
    }

    fn normalise(&mut self) {
        for list in [&mut self.greg, &mut self.gexp] {
            for e in list.iter_mut() {
                *e = norm_edge(e.0, e.1);
            }
            list.sort_unstable();
            list.dedup();
        }
        for s in &mut self.spots {
            *s = DenseSpot::new(s.u.clone(), s.w.clone(), s.f.clone());
        }
    }

    pub fn cluster_union(&self) -> VertexSet {
        VertexSet::union_all(&self.clusters)
    }

    /// Index of the cluster containing each vertex.
    pub fn cluster_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &v in c {
                if v < n {
                    out[v] = Some(i);
                }
            }
        }
        out
    }

    pub fn greg_graph(&self, n: usize) -> Graph {
        Graph::from_edges_lossy(n, self.greg.iter().copied())
    }

    pub fn gexp_graph(&self, n: usize) -> Graph {
        Graph::from_edges_lossy(n, self.gexp.iter().copied())
    }

    /// G_D: the union of all dense spots.
    pub fn spot_graph(&self, n: usize) -> Graph {
        super::spot::union_graph(n, &self.spots)
    }

    /// Rejects out-of-range ids and malformed spots.
    pub fn validate_shape(&self, g: &Graph) -> Result<()> {
        let n = g.n();
        let sets = self.clusters.iter().chain([&self.huge, &self.avoiding]);
        for s in sets {
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::Input(format!("decomposition vertex {v} out of range")));
            }
        }
        for &(a, b) in self.greg.iter().chain(&self.gexp) {
            if a >= n || b >= n || a == b {
                return Err(Error::Input(format!("decomposition edge ({a},{b}) is malformed")));
            }
        }
        for s in &self.spots {
            s.validate_shape(g)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Sparse,
    Bounded,
}

/// Edges captured by the decomposition:
/// E(G_reg) ∪ E(G_exp) ∪ E_G(H, V) ∪ E_G(E, E ∪ ⋃clusters) for the sparse
/// variant; the bounded variant drops the H term and takes the last term
/// in G_D.
pub fn captured_edges(g: &Graph, d: &SparseDecomposition, variant: Variant) -> Vec<Edge> {
    let mut out: HashSet<Edge> = HashSet::new();
    out.extend(d.greg.iter().copied().filter(|&(a, b)| g.has_edge(a, b)));
    out.extend(d.gexp.iter().copied().filter(|&(a, b)| g.has_edge(a, b)));
    let e_or_clusters = d.avoiding.union(&d.cluster_union());
    let (host, huge_term) = match variant {
        Variant::Sparse => (g.clone(), true),
        Variant::Bounded => (d.spot_graph(g.n()), false),
    };
    if huge_term {
        out.extend(g.edges_between(&d.huge, &g.vertices()));
    }
    out.extend(host.edges_between(&d.avoiding, &e_or_clusters));
    let mut v: Vec<Edge> = out.into_iter().collect();
    v.sort_unstable();
    v
}

/// G_∇: the captured edges as a graph.
pub fn captured_graph(g: &Graph, d: &SparseDecomposition) -> Graph {
    Graph::from_edges_lossy(g.n(), captured_edges(g, d, Variant::Sparse))
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyCheck {
    pub property: String,
    pub ok: bool,
    /// False when part of the check was a heuristic search.
    pub exact: bool,
    /// True when the property held only because an object was empty.
    pub vacuous: bool,
    pub detail: Option<String>,
}

impl PropertyCheck {
    fn new(property: &str) -> Self {
        PropertyCheck { property: property.into(), ok: true, exact: true, vacuous: false, detail: None }
    }

    fn fail(&mut self, why: String) {
        if self.ok {
            self.detail = Some(why);
        }
        self.ok = false;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub checks: Vec<PropertyCheck>,
    pub ok: bool,
}

impl DecompositionReport {
    fn from_checks(checks: Vec<PropertyCheck>) -> Self {
        let ok = checks.iter().all(|c| c.ok);
        DecompositionReport { checks, ok }
    }

    pub fn check(&self, property: &str) -> Option<&PropertyCheck> {
        self.checks.iter().find(|c| c.property == property)
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub spot_search: SpotSearchOptions,
    pub avoiding: AvoidingOptions,
    pub certify: CertifyOptions,
}

/// Checks the eight bounded-decomposition properties plus the optional
/// avoiding threshold of `d` with respect to G and a prepartition
/// (empty means the single class V(G)).
pub fn verify_bounded_decomposition(
    g: &Graph,
    prepartition: &[VertexSet],
    d: &SparseDecomposition,
    opts: &VerifyOptions,
) -> Result<DecompositionReport> {
    d.validate_shape(g)?;
    let n = g.n();
    let p = &d.params;
    let k = int(p.k);
    let gamma_k = &p.gamma * &k;
    let gexp = d.gexp_graph(n);
    let gexp_support = gexp.support();
    let mut checks = Vec::new();

    // 1: expander part is nowhere dense with large minimum degree.
    let mut c1 = PropertyCheck::new("1_gexp");
    if let Some(&(a, b)) = d.gexp.iter().find(|&&(a, b)| !g.has_edge(a, b)) {
        c1.fail(format!("G_exp edge ({a},{b}) not in G"));
    }
    if d.gexp.is_empty() {
        c1.vacuous = true;
    } else {
        let search = search_dense_spot(&gexp, &gamma_k, &p.gamma, &opts.spot_search);
        c1.exact = search.ground_truth;
        if let Some(s) = search.spot {
            c1.fail(format!("G_exp contains a dense spot with sides {:?} / {:?}", s.u, s.w));
        }
        let min = gexp_support.iter().map(|&v| gexp.degree(v)).min().unwrap_or(0);
        if int(min) <= &p.rho * &k {
            c1.fail(format!("G_exp minimum degree {min} not above rho k"));
        }
    }
    checks.push(c1);

    // 2: clusters are disjoint.
    let mut c2 = PropertyCheck::new("2_clusters_disjoint");
    let mut owner = vec![None; n];
    for (i, c) in d.clusters.iter().enumerate() {
        if c.is_empty() {
            c2.fail(format!("cluster {i} is empty"));
        }
        for &v in c {
            if let Some(j) = owner[v] {
                c2.fail(format!("clusters {j} and {i} share vertex {v}"));
            }
            owner[v] = Some(i);
        }
    }
    checks.push(c2);

    // 3: regularized part.
    let mut c3 = PropertyCheck::new("3_greg");
    c3.vacuous = d.greg.is_empty();
    let gexp_edges: HashSet<Edge> = d.gexp.iter().copied().collect();
    let greg_set: HashSet<Edge> = d.greg.iter().copied().collect();
    let mut cluster_pairs: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    for &(a, b) in &d.greg {
        if !g.has_edge(a, b) || gexp_edges.contains(&(a, b)) {
            c3.fail(format!("G_reg edge ({a},{b}) not in G - G_exp"));
            continue;
        }
        match (owner[a], owner[b]) {
            (Some(x), Some(y)) if x != y => {
                cluster_pairs.insert((x.min(y), x.max(y)), ());
            }
            _ => c3.fail(format!("G_reg edge ({a},{b}) not between two distinct clusters")),
        }
    }
    let gamma_sq = &p.gamma * &p.gamma;
    for &(x, y) in cluster_pairs.keys() {
        let (cx, cy) = (&d.clusters[x], &d.clusters[y]);
        if !cx.is_disjoint(cy) {
            c3.fail(format!("clusters {x},{y} overlap"));
            continue;
        }
        if let Some(e) = g.edges_between(cx, cy).into_iter().find(|e| !greg_set.contains(e)) {
            c3.fail(format!("G edge {e:?} between clusters {x},{y} missing from G_reg"));
        }
        let v = certify_regular(g, cx, cy, &p.epsilon, &opts.certify)?;
        c3.exact &= v.mode == CertMode::Exhaustive;
        if !v.regular {
            c3.fail(format!("clusters {x},{y} not epsilon-regular"));
        }
        if v.density < gamma_sq {
            c3.fail(format!("clusters {x},{y} have density {} below gamma^2", v.density));
        }
    }
    checks.push(c3);

    // 4: equal cluster sizes between nu k and eps k.
    let mut c4 = PropertyCheck::new("4_cluster_sizes");
    c4.vacuous = d.clusters.is_empty();
    if let Some(first) = d.clusters.first() {
        let size = first.len();
        if d.clusters.iter().any(|c| c.len() != size) {
            c4.fail("clusters differ in size".into());
        }
        if int(size) < &p.nu * &k || int(size) > &p.epsilon * &k {
            c4.fail(format!("cluster size {size} outside [nu k, eps k]"));
        }
    }
    checks.push(c4);

    // 5: spots are edge-disjoint dense spots of G - G_exp covering the
    // edges between their sides.
    let mut c5 = PropertyCheck::new("5_spots");
    c5.vacuous = d.spots.is_empty();
    if !edge_disjoint(&d.spots) {
        c5.fail("spots share an edge".into());
    }
    let spot_edges: HashSet<Edge> = d.spots.iter().flat_map(|s| s.f.iter().copied()).collect();
    for (i, s) in d.spots.iter().enumerate() {
        let check = is_dense_spot(g, s, &gamma_k, &p.gamma)?;
        if !check.is_spot {
            c5.fail(format!("spot {i}: {}", check.reason.unwrap_or_default()));
        }
        if s.f.iter().any(|e| gexp_edges.contains(e)) {
            c5.fail(format!("spot {i} uses a G_exp edge"));
        }
        if let Some(e) = g.edges_between(&s.u, &s.w).into_iter().find(|e| !spot_edges.contains(e)) {
            c5.fail(format!("edge {e:?} between the sides of spot {i} is uncovered"));
        }
    }
    checks.push(c5);

    // 6: every G_reg cluster pair sits inside a spot.
    let mut c6 = PropertyCheck::new("6_greg_in_spots");
    c6.vacuous = cluster_pairs.is_empty();
    for &(x, y) in cluster_pairs.keys() {
        if !d.spots.iter().any(|s| s.holds_pair(&d.clusters[x], &d.clusters[y])) {
            c6.fail(format!("no spot holds clusters {x},{y}"));
        }
    }
    checks.push(c6);

    // 7: clusters respect the prepartition, G_exp and spot sides.
    let mut c7 = PropertyCheck::new("7_cluster_nesting");
    let classes: Vec<VertexSet> = if prepartition.is_empty() { vec![g.vertices()] } else { prepartition.to_vec() };
    for (i, c) in d.clusters.iter().enumerate() {
        if !classes.iter().any(|cl| c.is_subset(cl)) {
            c7.fail(format!("cluster {i} straddles prepartition classes"));
        }
        let inside = c.intersection(&gexp_support).len();
        if inside != 0 && inside != c.len() {
            c7.fail(format!("cluster {i} straddles V(G_exp)"));
        }
        if let Some(j) = d.spots.iter().position(|s| !s.nests(c)) {
            c7.fail(format!("cluster {i} is cut by a side of spot {j}"));
        }
    }
    checks.push(c7);

    // 8: avoiding set.
    let mut c8 = PropertyCheck::new("8_avoiding");
    c8.vacuous = d.avoiding.is_empty();
    if !d.avoiding.is_disjoint(&d.cluster_union()) {
        c8.fail("avoiding set meets a cluster".into());
    }
    let spot_vertices = VertexSet::union_all(d.spots.iter().map(|s| s.vertices()).collect::<Vec<_>>().iter());
    if !d.avoiding.is_subset(&spot_vertices) {
        c8.fail("avoiding set leaves the spots".into());
    }
    match check_avoiding(&d.spots, &d.avoiding, &p.lambda, &p.epsilon, &p.gamma, p.k, &opts.avoiding) {
        AvoidingVerdict::Verified => {}
        AvoidingVerdict::NotFalsified { .. } => c8.exact = false,
        AvoidingVerdict::Falsified { witness, bad } => {
            c8.fail(format!("U = {:?} leaves {} bad vertices", witness.as_slice(), bad.len()))
        }
    }
    checks.push(c8);

    // 9: avoiding threshold.
    let mut c9 = PropertyCheck::new("9_avoiding_threshold");
    match &p.b {
        None => c9.vacuous = true,
        Some(b) => {
            for (i, c) in d.clusters.iter().enumerate() {
                let max = g.maxdeg_into(c, &d.avoiding).unwrap_or(0);
                let min = g.mindeg_into(c, &d.avoiding).unwrap_or(0);
                if !(&int(max) <= b || &int(min) > b) {
                    c9.fail(format!("cluster {i} has degrees {min}..{max} into E across b"));
                }
            }
        }
    }
    checks.push(c9);

    Ok(DecompositionReport::from_checks(checks))
}

/// Checks the sparse-decomposition properties: huge vertices have degree
/// at least Omega** k, the spots, G_exp and edges at H give every other
/// vertex degree at most Omega* k, and the rest is a bounded
/// decomposition of G - H with the prepartition restricted to V - H.
pub fn verify_sparse_decomposition(
    g: &Graph,
    prepartition: &[VertexSet],
    d: &SparseDecomposition,
    opts: &VerifyOptions,
) -> Result<DecompositionReport> {
    d.validate_shape(g)?;
    let n = g.n();
    let p = &d.params;
    let k = int(p.k);
    let mut huge = PropertyCheck::new("s1_huge_degree");
    huge.vacuous = d.huge.is_empty();
    if let Some(&v) = d.huge.iter().find(|&&v| int(g.degree(v)) < &p.omega_star_star * &k) {
        huge.fail(format!("vertex {v} in H has degree {} below Omega** k", g.degree(v)));
    }
    let mut aux: Vec<Edge> = d.spots.iter().flat_map(|s| s.f.iter().copied()).collect();
    aux.extend(d.gexp.iter().copied());
    aux.extend(g.edges_between(&d.huge, &g.vertices()));
    let aux = Graph::from_edges_lossy(n, aux);
    let mut bounded_deg = PropertyCheck::new("s1_bounded_degree");
    if let Some(v) = (0..n).filter(|&v| !d.huge.contains(v)).find(|&v| int(aux.degree(v)) > &p.omega_star * &k) {
        bounded_deg.fail(format!("vertex {v} has degree {} in the spot/expander/H graph", aux.degree(v)));
    }
    let mut outside = PropertyCheck::new("s2_outside_huge");
    let touches = |e: &Edge| d.huge.contains(e.0) || d.huge.contains(e.1);
    if d.clusters.iter().chain([&d.avoiding]).any(|c| !c.is_disjoint(&d.huge)) {
        outside.fail("a cluster or the avoiding set meets H".into());
    }
    if d.greg.iter().chain(&d.gexp).any(touches) || d.spots.iter().any(|s| s.f.iter().any(touches)) {
        outside.fail("an edge of G_reg, G_exp or a spot meets H".into());
    }
    if !outside.ok {
        return Ok(DecompositionReport::from_checks(vec![huge, bounded_deg, outside]));
    }
    let rest = g.without_vertices(&d.huge);
    let restricted: Vec<VertexSet> = prepartition.iter().map(|c| c.difference(&d.huge)).collect();
    let mut classes = restricted;
    if !classes.is_empty() {
        // H itself forms a class of isolated vertices in G - H.
        classes.push(d.huge.clone());
    }
    let inner = verify_bounded_decomposition(&rest, &classes, d, opts)?;
    let mut checks = vec![huge, bounded_deg, outside];
    checks.extend(inner.checks);
    Ok(DecompositionReport::from_checks(checks))
}
