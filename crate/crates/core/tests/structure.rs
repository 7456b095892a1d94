use std::collections::{BTreeSet, HashSet};

use lks_core::dense::{DecompositionParams, SparseDecomposition};
use lks_core::generate::{cluster_plant, figure2_family, Figure2Spec, PlantSpec};
use lks_core::graph::{Edge, Graph, VertexSet};
use lks_core::matching::{RegularizedMatching, SetPair};
use lks_core::rational::{int, rat, Rational};
use lks_core::structure::{
    build_sr, choose_separator_pair, cluster_graph, compute_s0, compute_xtriple, extend_to_n1, hat_deg, isolated_s0,
    rough_structure, separator_objective, verify_structure, ClusterClasses, ClusterSide, Dichotomy, SeparatorPair,
    StructureParams,
};
use lks_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(k: usize) -> DecompositionParams {
    DecompositionParams {
        k,
        omega_star_star: int(3),
        omega_star: int(2),
        lambda: rat(1, 4),
        gamma: rat(1, 2),
        epsilon: rat(1, 10),
        nu: rat(1, 10),
        rho: rat(1, 4),
        b: None,
    }
}

fn decomposition(clusters: Vec<VertexSet>, gexp: Vec<Edge>, avoiding: VertexSet, k: usize) -> SparseDecomposition {
    SparseDecomposition {
        huge: VertexSet::new(),
        clusters,
        spots: Vec::new(),
        greg: Vec::new(),
        gexp,
        avoiding,
        params: params(k),
    }
}

fn set(vs: &[usize]) -> VertexSet {
    vs.iter().copied().collect()
}

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).unwrap()
}

// ---------- vertex-class oracles ----------

/// S0 by direct degree comparison with hash sets.
fn s0_oracle(g: &Graph, k: usize, eta: &Rational, gexp: &[Edge], avoiding: &VertexSet) -> BTreeSet<usize> {
    let touched: HashSet<usize> = gexp.iter().flat_map(|&(a, b)| [a, b]).collect();
    (0..g.n())
        .filter(|&v| int(g.degree(v)) < (int(1) + eta) * int(k))
        .filter(|v| !touched.contains(v) && !avoiding.contains(*v))
        .collect()
}

fn hat_oracle(g: &Graph, s0: &BTreeSet<usize>, covered: &HashSet<usize>, v: usize) -> usize {
    g.neighbors(v).iter().filter(|u| s0.contains(u) && !covered.contains(u)).count()
}

#[test]
fn s0_drops_expander_and_avoiding_vertices() {
    // Path 0-1-2-3-4-5 with k = 2, eta = 0: the ends are small.
    let g = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
    let plain = decomposition(Vec::new(), Vec::new(), VertexSet::new(), 2);
    assert_eq!(compute_s0(&g, &plain, &int(0)).unwrap(), set(&[0, 5]));
    let with_exp = decomposition(Vec::new(), vec![(0, 1)], VertexSet::new(), 2);
    assert_eq!(compute_s0(&g, &with_exp, &int(0)).unwrap(), set(&[5]));
    let with_avoid = decomposition(Vec::new(), Vec::new(), set(&[5]), 2);
    assert_eq!(compute_s0(&g, &with_avoid, &int(0)).unwrap(), set(&[0]));
}

#[test]
fn hat_degree_of_star_centre() {
    let g = Graph::new(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
    let nabla = decomposition(Vec::new(), Vec::new(), VertexSet::new(), 2);
    let empty = RegularizedMatching::default();
    assert_eq!(hat_deg(&g, &nabla, &int(0), &empty, &empty, 0).unwrap(), 5);
    let mb = RegularizedMatching::new(vec![SetPair::new(set(&[0]), set(&[1]))]);
    assert_eq!(hat_deg(&g, &nabla, &int(0), &empty, &mb, 0).unwrap(), 4);
    assert!(matches!(hat_deg(&g, &nabla, &int(0), &empty, &mb, 9), Err(Error::Input(_))));
}

#[test]
fn empty_mb_puts_all_large_vertices_in_xa() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_graph(14, 0.3, &mut rng);
    let nabla = decomposition(Vec::new(), Vec::new(), VertexSet::new(), 3);
    let empty = RegularizedMatching::default();
    let triple = compute_xtriple(&g, &nabla, &rat(1, 3), &empty, &empty).unwrap();
    let large: VertexSet = (0..14).filter(|&v| int(g.degree(v)) >= int(4)).collect();
    assert_eq!(triple.xa, large);
    assert!(triple.xb.is_empty() && triple.xc.is_empty());
}

#[test]
fn matched_large_vertices_without_small_neighbours_are_xb() {
    let g = Graph::complete(4);
    let nabla = decomposition(Vec::new(), Vec::new(), VertexSet::new(), 2);
    let mb = RegularizedMatching::new(vec![SetPair::new(set(&[0, 1]), set(&[2, 3]))]);
    let triple = compute_xtriple(&g, &nabla, &int(0), &RegularizedMatching::default(), &mb).unwrap();
    assert_eq!(triple.xb, set(&[0, 1, 2, 3]));
    assert!(triple.xa.is_empty() && triple.xc.is_empty());
}

#[test]
fn star_centre_with_many_free_leaves_is_xc() {
    let g = Graph::new(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
    let nabla = decomposition(Vec::new(), Vec::new(), VertexSet::new(), 2);
    let mb = RegularizedMatching::new(vec![SetPair::new(set(&[0]), set(&[1]))]);
    let triple = compute_xtriple(&g, &nabla, &int(0), &RegularizedMatching::default(), &mb).unwrap();
    assert_eq!(triple.xc, set(&[0]));
    assert_eq!(triple.hat_degrees[&0], 4);
}

#[test]
fn overlapping_matchings_are_rejected() {
    let g = Graph::complete(4);
    let nabla = decomposition(Vec::new(), Vec::new(), VertexSet::new(), 2);
    let m = RegularizedMatching::new(vec![SetPair::new(set(&[0]), set(&[1]))]);
    assert!(matches!(compute_xtriple(&g, &nabla, &int(0), &m, &m), Err(Error::Precondition(_))));
}

/// Random graph with a random expander edge set, avoiding set and two
/// disjoint matchings of singleton pairs.
fn class_instance(seed: u64) -> (Graph, SparseDecomposition, RegularizedMatching, RegularizedMatching) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..18);
    let g = random_graph(n, 0.3, &mut rng);
    let gexp: Vec<Edge> = g.edges().iter().copied().filter(|_| rng.gen_bool(0.2)).collect();
    let avoiding: VertexSet = (0..n).filter(|_| rng.gen_bool(0.15)).collect();
    let nabla = decomposition(Vec::new(), gexp, avoiding, rng.gen_range(1..5));
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut pairs = order.chunks(2).filter(|c| c.len() == 2).map(|c| SetPair::new(set(&[c[0]]), set(&[c[1]])));
    let ma = RegularizedMatching::new(pairs.by_ref().take(rng.gen_range(0..3)).collect());
    let mb = RegularizedMatching::new(pairs.take(rng.gen_range(0..4)).collect());
    (g, nabla, ma, mb)
}

proptest! {
    #[test]
    fn class_recounts_match_oracle(seed in 0u64..10_000, eta_num in 0i64..4) {
        let (g, nabla, ma, mb) = class_instance(seed);
        let eta = rat(eta_num, 4);
        let k = nabla.params.k;
        let s0 = s0_oracle(&g, k, &eta, &nabla.gexp, &nabla.avoiding);
        let got = compute_s0(&g, &nabla, &eta).unwrap();
        prop_assert_eq!(got.iter().copied().collect::<BTreeSet<_>>(), s0.clone());
        let covered: HashSet<usize> = ma.vertex_set().union(&mb.vertex_set()).iter().copied().collect();
        for v in 0..g.n() {
            prop_assert_eq!(hat_deg(&g, &nabla, &eta, &ma, &mb, v).unwrap(), hat_oracle(&g, &s0, &covered, v));
        }
    }

    #[test]
    fn xtriple_partitions_large_vertices(seed in 0u64..10_000, eta_num in 0i64..4) {
        let (g, nabla, ma, mb) = class_instance(seed);
        let eta = rat(eta_num, 4);
        let triple = compute_xtriple(&g, &nabla, &eta, &ma, &mb).unwrap();
        let k = nabla.params.k;
        let large: VertexSet = (0..g.n()).filter(|&v| int(g.degree(v)) >= (int(1) + &eta) * int(k)).collect();
        prop_assert!(triple.xa.is_disjoint(&triple.xb));
        prop_assert!(triple.xa.is_disjoint(&triple.xc));
        prop_assert!(triple.xb.is_disjoint(&triple.xc));
        prop_assert_eq!(triple.xa.union(&triple.xb).union(&triple.xc), large.clone());
        prop_assert_eq!(triple.xa.clone(), large.difference(&mb.vertex_set()));
        let half = (int(1) + &eta) * int(k) / int(2);
        for &v in &triple.xb {
            prop_assert!(int(triple.hat_degrees[&v]) < half);
        }
        for &v in &triple.xc {
            prop_assert!(int(triple.hat_degrees[&v]) >= half);
        }
    }
}

// ---------- cluster-graph stage oracles ----------

/// Whether the subgraph induced by `verts` has a perfect matching, by
/// exhaustive search.
fn has_perfect_matching(g: &Graph, verts: &[usize]) -> bool {
    match verts.split_first() {
        None => true,
        Some((&v, rest)) => rest.iter().enumerate().any(|(i, &u)| {
            if !g.has_edge(v, u) {
                return false;
            }
            let remaining: Vec<usize> = rest.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &w)| w).collect();
            has_perfect_matching(g, &remaining)
        }),
    }
}

fn factor_critical(g: &Graph, comp: &[usize]) -> bool {
    comp.iter().all(|&v| {
        let rest: Vec<usize> = comp.iter().copied().filter(|&u| u != v).collect();
        has_perfect_matching(g, &rest)
    })
}

/// Components of the graph minus `removed`, by flood fill.
fn components_without(g: &Graph, removed: &HashSet<usize>) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; g.n()];
    let mut comps = Vec::new();
    for s in 0..g.n() {
        if removed.contains(&s) || label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = comps.len();
        let mut comp = Vec::new();
        while let Some(x) = stack.pop() {
            comp.push(x);
            for &y in g.neighbors(x) {
                if !removed.contains(&y) && label[y] == usize::MAX {
                    label[y] = comps.len();
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Validity of (Q, N0): every component of the graph minus Q is
/// factor-critical and N0 matches each Q vertex into a distinct component.
fn separator_valid(g: &Graph, q: &HashSet<usize>, n0: &[Edge]) -> bool {
    let comps = components_without(g, q);
    if !comps.iter().all(|c| factor_critical(g, c)) || n0.len() != q.len() {
        return false;
    }
    let mut used_q = HashSet::new();
    let mut used_comp = HashSet::new();
    n0.iter().all(|&(d, c)| {
        let Some(ci) = comps.iter().position(|comp| comp.contains(&c)) else { return false };
        g.has_edge(d, c) && q.contains(&d) && used_q.insert(d) && used_comp.insert(ci)
    })
}

fn isolated_oracle(g: &Graph, q: &HashSet<usize>, in_s0: &[bool]) -> Vec<usize> {
    (0..g.n()).filter(|&c| in_s0[c] && !q.contains(&c) && g.neighbors(c).iter().all(|d| q.contains(d))).collect()
}

fn objective_oracle(g: &Graph, q: &HashSet<usize>, n0: &[Edge], in_s0: &[bool]) -> usize {
    let covered: HashSet<usize> = n0.iter().map(|&(_, c)| c).collect();
    isolated_oracle(g, q, in_s0).into_iter().filter(|c| !covered.contains(c)).count()
}

/// Every assignment of Q vertices to distinct outside neighbours.
fn all_assignments(g: &Graph, q: &[usize], used: &mut Vec<usize>, current: &mut Vec<Edge>, out: &mut Vec<Vec<Edge>>) {
    let Some((&d, rest)) = q.split_first() else {
        out.push(current.clone());
        return;
    };
    let qset: HashSet<usize> = q.iter().copied().collect();
    for &c in g.neighbors(d) {
        if qset.contains(&c) || used.contains(&c) || current.iter().any(|&(x, _)| x == c) {
            continue;
        }
        used.push(c);
        current.push((d, c));
        all_assignments(g, rest, used, current, out);
        current.pop();
        used.pop();
    }
}

/// Whether some alternating path z, d1, c1, ..., dm, cm exists with z an
/// uncovered isolated S0 cluster, c1..c(m-1) isolated S0 clusters and cm
/// outside that class, by depth-first enumeration of simple paths.
fn improving_path_exists(g: &Graph, q: &HashSet<usize>, n0: &[Edge], in_s0: &[bool]) -> bool {
    let isolated: HashSet<usize> = isolated_oracle(g, q, in_s0).into_iter().collect();
    let mate = |d: usize| n0.iter().find(|&&(x, _)| x == d).map(|&(_, c)| c);
    let covered: HashSet<usize> = n0.iter().map(|&(_, c)| c).collect();
    fn walk(
        g: &Graph,
        x: usize,
        visited: &mut Vec<usize>,
        q: &HashSet<usize>,
        isolated: &HashSet<usize>,
        mate: &dyn Fn(usize) -> Option<usize>,
    ) -> bool {
        for &d in g.neighbors(x) {
            if !q.contains(&d) || visited.contains(&d) || mate(d) == Some(x) {
                continue;
            }
            let Some(c) = mate(d) else { continue };
            if visited.contains(&c) {
                continue;
            }
            if !isolated.contains(&c) {
                return true;
            }
            visited.extend([d, c]);
            if walk(g, c, visited, q, isolated, mate) {
                return true;
            }
            visited.truncate(visited.len() - 2);
        }
        false
    }
    isolated.iter().filter(|z| !covered.contains(z)).any(|&z| walk(g, z, &mut vec![z], q, &isolated, &mate))
}

fn classes_from(sides: &[bool], in_s0: &[bool]) -> ClusterClasses {
    ClusterClasses {
        side: sides.iter().map(|&s| if s { ClusterSide::Small } else { ClusterSide::Large }).collect(),
        in_s0: in_s0.to_vec(),
    }
}

fn random_cluster_graph(seed: u64, max: usize) -> (Graph, ClusterClasses) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=max);
    let p = rng.gen_range(0.1..0.6);
    let g = random_graph(count, p, &mut rng);
    let small: Vec<bool> = (0..count).map(|_| rng.gen_bool(0.6)).collect();
    let in_s0: Vec<bool> = small.iter().map(|&s| s && rng.gen_bool(0.8)).collect();
    (g, classes_from(&small, &in_s0))
}

#[test]
fn edgeless_cluster_graph_has_empty_separator() {
    let cg = Graph::empty(5);
    let classes = classes_from(&[true; 5], &[true; 5]);
    let pair = choose_separator_pair(&cg, &classes).unwrap();
    assert!(pair.q.is_empty() && pair.n0.is_empty());
    let closure = build_sr(&cg, &pair, &classes);
    assert_eq!(closure.sr, set(&[0, 1, 2, 3, 4]));
    assert!(closure.claim_sr_isolated);
}

#[test]
fn path_prefers_covering_the_small_end() {
    // s - l - l2 with s in S0: the middle cluster must be matched to s.
    let cg = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
    let classes = classes_from(&[true, false, false], &[true, false, false]);
    let pair = choose_separator_pair(&cg, &classes).unwrap();
    assert_eq!(pair.q, set(&[1]));
    assert_eq!(pair.n0, vec![(1, 0)]);
    assert_eq!(separator_objective(&cg, &pair, &classes), 0);
    // The other choice leaves s uncovered.
    let worse = SeparatorPair { q: set(&[1]), n0: vec![(1, 2)], swaps: 0 };
    assert_eq!(separator_objective(&cg, &worse, &classes), 1);
}

#[test]
fn five_cycle_of_large_clusters_exposes_its_lowest_cluster() {
    let cg = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
    let classes = classes_from(&[false; 5], &[false; 5]);
    let pair = choose_separator_pair(&cg, &classes).unwrap();
    assert!(pair.q.is_empty());
    let ext = extend_to_n1(&cg, &pair, &classes).unwrap();
    assert_eq!(ext.n1.len(), 2);
    let covered: BTreeSet<usize> = ext.n1.iter().flat_map(|&(a, b)| [a, b]).collect();
    assert_eq!(covered, (1..5).collect());
    assert!(ext.uncovered_independent);
}

#[test]
fn small_only_component_without_separator_is_an_input_error() {
    // A triangle of small clusters not in S0 has no large cluster to expose.
    let cg = Graph::complete(3);
    let classes = classes_from(&[true; 3], &[false; 3]);
    let pair = choose_separator_pair(&cg, &classes).unwrap();
    assert!(matches!(extend_to_n1(&cg, &pair, &classes), Err(Error::Input(_))));
}

#[test]
fn separator_is_a_global_minimum_for_its_separator_set() {
    for seed in 0..400 {
        let (cg, classes) = random_cluster_graph(seed, 8);
        let pair = choose_separator_pair(&cg, &classes).unwrap();
        let q: HashSet<usize> = pair.q.iter().copied().collect();
        assert!(separator_valid(&cg, &q, &pair.n0), "seed {seed}: invalid separator pair");
        assert!(!improving_path_exists(&cg, &q, &pair.n0, &classes.in_s0), "seed {seed}: not a fixpoint");
        let got = separator_objective(&cg, &pair, &classes);
        assert_eq!(got, objective_oracle(&cg, &q, &pair.n0, &classes.in_s0));
        let q_list: Vec<usize> = pair.q.iter().copied().collect();
        let mut all = Vec::new();
        all_assignments(&cg, &q_list, &mut Vec::new(), &mut Vec::new(), &mut all);
        let best = all
            .iter()
            .filter(|n0| separator_valid(&cg, &q, n0))
            .map(|n0| objective_oracle(&cg, &q, n0, &classes.in_s0))
            .min()
            .unwrap();
        assert_eq!(got, best, "seed {seed}");
    }
}

/// SR by repeated sweeps over all (Z, D) pairs until nothing changes.
fn sr_oracle(cg: &Graph, pair: &SeparatorPair, classes: &ClusterClasses) -> BTreeSet<usize> {
    let q: HashSet<usize> = pair.q.iter().copied().collect();
    let covered: HashSet<usize> = pair.n0.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut sr: BTreeSet<usize> =
        isolated_oracle(cg, &q, &classes.in_s0).into_iter().filter(|c| !covered.contains(c)).collect();
    loop {
        let mut grown = sr.clone();
        for &z in &sr {
            for &(d, c) in &pair.n0 {
                if cg.has_edge(z, d) && classes.side[c] == ClusterSide::Small {
                    grown.insert(c);
                }
            }
        }
        if grown == sr {
            return sr;
        }
        sr = grown;
    }
}

#[test]
fn closure_of_a_lone_isolated_cluster() {
    // Star with centre 0 (large) and three small S0 leaves.
    let cg = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let classes = classes_from(&[false, true, true, true], &[false, true, true, true]);
    let pair = choose_separator_pair(&cg, &classes).unwrap();
    assert_eq!(pair.q, set(&[0]));
    let closure = build_sr(&cg, &pair, &classes);
    assert_eq!(closure.isolated, set(&[1, 2, 3]));
    assert_eq!(closure.sr, set(&[1, 2, 3]));
    assert!(closure.claim_sr_isolated && closure.q_partner_s0 && closure.q_partner_other);
}

proptest! {
    #[test]
    fn closure_matches_oracle_and_claims_hold(seed in 0u64..100_000) {
        let (cg, classes) = random_cluster_graph(seed, 12);
        let pair = choose_separator_pair(&cg, &classes).unwrap();
        let closure = build_sr(&cg, &pair, &classes);
        prop_assert_eq!(closure.sr.iter().copied().collect::<BTreeSet<_>>(), sr_oracle(&cg, &pair, &classes));
        prop_assert_eq!(closure.isolated.clone(), isolated_s0(&cg, &pair.q, &classes));
        prop_assert!(closure.claim_sr_isolated);
        prop_assert!(closure.q_partner_s0);
        prop_assert!(closure.q_partner_other);
    }

    #[test]
    fn extension_contains_separator_matching(seed in 0u64..100_000) {
        let (cg, classes) = random_cluster_graph(seed, 12);
        let pair = choose_separator_pair(&cg, &classes).unwrap();
        match extend_to_n1(&cg, &pair, &classes) {
            Ok(ext) => {
                let mut seen = HashSet::new();
                for &(a, b) in &ext.n1 {
                    prop_assert!(cg.has_edge(a, b));
                    prop_assert!(seen.insert(a) && seen.insert(b));
                }
                for e in &pair.n0 {
                    prop_assert!(ext.n1.contains(e));
                }
                prop_assert!(ext.uncovered_independent);
            }
            Err(Error::Input(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

// ---------- full pipeline ----------

/// Assertions (a)–(d) recomputed from raw sets.
fn abcd_oracle(
    g: &Graph,
    nabla: &SparseDecomposition,
    eta: &Rational,
    ma: &RegularizedMatching,
    mb: &RegularizedMatching,
) -> [bool; 4] {
    let k = nabla.params.k;
    let is_large = |v: usize| int(g.degree(v)) >= (int(1) + eta) * int(k);
    let pairs: Vec<&SetPair> = ma.pairs.iter().chain(&mb.pairs).collect();
    let mut seen = HashSet::new();
    let a = pairs.iter().all(|p| p.a.iter().chain(p.b.iter()).all(|&v| seen.insert(v)));
    let s0 = s0_oracle(g, k, eta, &nabla.gexp, &nabla.avoiding);
    let b = mb.pairs.iter().all(|p| p.a.iter().all(|v| s0.contains(v)));
    let pure = |x: &VertexSet| x.iter().all(|&v| is_large(v)) || x.iter().all(|&v| !is_large(v));
    let inside = |x: &VertexSet, y: &VertexSet| x.iter().all(|v| y.contains(*v));
    let c = pairs.iter().all(|p| {
        let in_spot = nabla
            .spots
            .iter()
            .any(|s| (inside(&p.a, &s.u) && inside(&p.b, &s.w)) || (inside(&p.a, &s.w) && inside(&p.b, &s.u)));
        in_spot && pure(&p.a) && pure(&p.b)
    });
    let d = pairs.iter().all(|p| {
        let first = nabla.clusters.iter().any(|cl| inside(&p.a, cl));
        let second = nabla.clusters.iter().any(|cl| inside(&p.b, cl))
            || p.b.iter().all(|&v| is_large(v) && nabla.avoiding.contains(v));
        first && second
    });
    [a, b, c, d]
}

#[test]
fn empty_decomposition_gives_empty_matchings() {
    let g = Graph::complete(6);
    let mut nabla = decomposition(Vec::new(), Vec::new(), VertexSet::new(), 2);
    nabla.params.gamma = rat(1, 2);
    let out = rough_structure(&g, &nabla, &StructureParams::new(int(0), rat(1, 10))).unwrap();
    assert!(out.ma.is_empty() && out.mb.is_empty());
    assert_eq!(out.triple.xa, g.vertices());
    assert!(out.report.k1);
    assert!(out.accepted);
}

#[test]
fn figure2_run_passes_exact_assertions() {
    for seed in 0..3 {
        let spec = Figure2Spec::default();
        let (g, nabla, audit) = figure2_family(&spec, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert!(audit.within_tolerance && audit.classes_match);
        let mut params = StructureParams::new(spec.eta.clone(), rat(1, 10));
        params.check_hypotheses = false;
        let out = rough_structure(&g, &nabla, &params).unwrap();
        assert_eq!(abcd_oracle(&g, &nabla, &spec.eta, &out.ma, &out.mb), [true; 4]);
        for name in ["a", "b", "c", "d", "triple"] {
            assert!(out.report.assertion(name).unwrap().ok, "seed {seed}: {name}");
        }
        assert!(out.accepted, "seed {seed}");
    }
}

#[test]
fn cluster_plant_run_is_compliant_and_accepted() {
    for seed in 0..3 {
        let spec = PlantSpec::default();
        let (g, nabla, _) = cluster_plant(&spec, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let out = rough_structure(&g, &nabla, &StructureParams::new(spec.eta.clone(), rat(1, 10))).unwrap();
        assert!(out.hypotheses.as_ref().unwrap().compliant, "seed {seed}");
        assert_eq!(abcd_oracle(&g, &nabla, &spec.eta, &out.ma, &out.mb), [true; 4]);
        assert!(out.accepted && out.dichotomy != Dichotomy::Neither);
        assert!(out.separation.verified && out.separation.rounds_within_bound);
    }
}

#[test]
fn overlapping_output_fails_assertion_a_with_witness() {
    let spec = PlantSpec::default();
    let (g, nabla, _) = cluster_plant(&spec, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let mut params = StructureParams::new(spec.eta.clone(), rat(1, 10));
    params.check_hypotheses = false;
    let mut out = rough_structure(&g, &nabla, &params).unwrap();
    let first = out.ma.pairs.first().cloned().expect("MA is non-empty");
    out.mb.pairs.push(first);
    assert!(!abcd_oracle(&g, &nabla, &spec.eta, &out.ma, &out.mb)[0]);
    // The triple recount itself rejects overlapping matchings.
    assert!(matches!(verify_structure(&g, &nabla, &spec.eta, &out), Err(Error::Precondition(_))));
    out.mb.pairs.pop();
    // A repeated MA pair is invisible to the triple but breaks (a).
    out.ma.pairs.push(out.ma.pairs[0].clone());
    let report = verify_structure(&g, &nabla, &spec.eta, &out).unwrap();
    let a = report.assertion("a").unwrap();
    assert!(!a.ok);
    assert!(a.witness.as_deref().unwrap().contains("repeats"));
    assert!(!report.ok);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lifted_matching_orients_into_the_separator(seed in 0u64..1_000) {
        let spec = PlantSpec::default();
        let (g, nabla, _) = cluster_plant(&spec, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let mut params = StructureParams::new(spec.eta.clone(), rat(1, 10));
        params.check_hypotheses = false;
        let out = rough_structure(&g, &nabla, &params).unwrap();
        let cg = cluster_graph(&nabla, g.n());
        let s0 = compute_s0(&g, &nabla, &spec.eta).unwrap();
        let (_, small) = lks_core::lks::classify_ls(&g, nabla.params.k, &spec.eta).unwrap();
        let large = g.vertices().difference(&small);
        let classes = ClusterClasses::new(&nabla, &small, &large, &s0).unwrap();
        let pair = choose_separator_pair(&cg, &classes).unwrap();
        let q_union = VertexSet::union_all(pair.q.iter().map(|&c| &nabla.clusters[c]));
        prop_assert!(out.lifted_m.v2().is_subset(&q_union));
        prop_assert!(out.lifted_m.v1().is_subset(&out.sr_vertices));
        prop_assert!(out.mb.v1().is_subset(&s0));
    }
}

#[test]
fn default_plant_wires_for_many_seeds() {
    for seed in 0..300 {
        let spec = PlantSpec::default();
        assert!(cluster_plant(&spec, &mut ChaCha8Rng::seed_from_u64(seed)).is_ok(), "seed {seed}");
    }
}
