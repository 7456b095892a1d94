use lks_core::dense::DenseSpot;
use lks_core::graph::{Edge, Graph, VertexSet};
use lks_core::matching::{
    absorbs, check_cluster_size_bound, gallai_edmonds, is_factor_critical, is_matching, matching_number,
    maximum_matching, spots_absorb, verify_gallai_edmonds, verify_regularized_matching, RegularizedMatching, SetPair,
};
use lks_core::rational::{int, rat};
use lks_core::regularity::CertifyOptions;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maximum matching size by memoised recursion over vertex bitmasks.
fn oracle_matching(g: &Graph) -> usize {
    fn go(g: &Graph, free: u32, memo: &mut std::collections::HashMap<u32, usize>) -> usize {
        if free == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&free) {
            return v;
        }
        let v = free.trailing_zeros() as usize;
        let rest = free & !(1 << v);
        let mut best = go(g, rest, memo);
        for &u in g.neighbors(v) {
            if rest & (1 << u) != 0 {
                best = best.max(1 + go(g, rest & !(1 << u), memo));
            }
        }
        memo.insert(free, best);
        best
    }
    go(g, (1u32 << g.n()) - 1, &mut Default::default())
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::new(n, &edges).unwrap()
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let p: f64 = rng.gen_range(0.1..0.9);
    let edges: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, &edges).unwrap()
}

fn cycle(n: usize) -> Graph {
    let edges: Vec<Edge> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::new(n, &edges).unwrap()
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::new(10, &edges).unwrap()
}

/// Some (Q, M) with factor-critical components of G - Q and M matching Q
/// into distinct components exists.
fn oracle_ge_exists(g: &Graph) -> bool {
    let n = g.n();
    (0u32..1 << n).any(|qmask| {
        let q: VertexSet = (0..n).filter(|&v| qmask >> v & 1 == 1).collect();
        let comps = g.components_within(&g.vertices().difference(&q));
        let fc = comps.iter().all(|c| {
            let (sub, _) = g.induced(c);
            c.len() % 2 == 1
                && (0..sub.n()).all(|v| {
                    let h = sub.without_vertices(&VertexSet::from(vec![v]));
                    2 * oracle_matching(&h) + 1 == sub.n()
                })
        });
        fc && {
            // bipartite Q -> components matching by brute recursion
            fn assign(g: &Graph, q: &[usize], comps: &[VertexSet], used: &mut Vec<bool>) -> bool {
                let Some((&x, rest)) = q.split_first() else { return true };
                (0..comps.len()).any(|i| {
                    if used[i] || !comps[i].iter().any(|&v| g.has_edge(x, v)) {
                        return false;
                    }
                    used[i] = true;
                    let ok = assign(g, rest, comps, used);
                    used[i] = false;
                    ok
                })
            }
            assign(g, q.as_slice(), &comps, &mut vec![false; comps.len()])
        }
    })
}

#[test]
fn small_examples_match_oracle() {
    let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(matching_number(&p3), 1);
    assert_eq!(oracle_matching(&cycle(5)), 2);
    assert_eq!(matching_number(&cycle(5)), 2);
    assert_eq!(oracle_matching(&petersen()), 5);
    assert_eq!(matching_number(&petersen()), 5);
    assert!(is_matching(&petersen(), &maximum_matching(&petersen())));
}

#[test]
fn exhaustive_small_orders_match_oracle() {
    for n in 0..=6usize {
        let pairs = n * n.saturating_sub(1) / 2;
        for mask in 0u64..1 << pairs {
            let g = graph_from_mask(n, mask);
            let m = maximum_matching(&g);
            assert!(is_matching(&g, &m));
            assert_eq!(m.len(), oracle_matching(&g), "n={n} mask={mask}");
        }
    }
}

#[test]
fn random_graphs_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let g = random_graph(&mut rng, n);
        assert_eq!(matching_number(&g), oracle_matching(&g));
    }
    for n in [7usize, 8] {
        for _ in 0..200 {
            let g = random_graph(&mut rng, n);
            assert_eq!(matching_number(&g), oracle_matching(&g));
        }
    }
}

#[test]
fn factor_criticality_examples() {
    assert!(is_factor_critical(&cycle(5)).factor_critical);
    assert_eq!(is_factor_critical(&cycle(5)).certificates.len(), 5);
    assert!(!is_factor_critical(&cycle(4)).factor_critical);
    assert!(is_factor_critical(&Graph::empty(1)).factor_critical);
}

#[test]
fn gallai_edmonds_examples() {
    let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
    let ge = gallai_edmonds(&p3).unwrap();
    assert_eq!(ge.q.as_slice(), &[1]);
    assert_eq!(ge.m.len(), 1);
    assert_eq!(ge.components.len(), 2);
    assert!(verify_gallai_edmonds(&p3, &ge).ok);

    let c5 = gallai_edmonds(&cycle(5)).unwrap();
    assert!(c5.q.is_empty() && c5.m.is_empty());
    assert_eq!(c5.components.len(), 1);

    let k4 = Graph::complete(4);
    let ge = gallai_edmonds(&k4).unwrap();
    assert_eq!(ge.q.len(), 1);
    assert_eq!(ge.components.len(), 1);
    assert_eq!(ge.components[0].len(), 3);
    assert!(verify_gallai_edmonds(&k4, &ge).ok);
}

#[test]
fn gallai_edmonds_verifies_exhaustively_on_small_orders() {
    for n in 1..=6usize {
        let pairs = n * (n - 1) / 2;
        for mask in 0u64..1 << pairs {
            let g = graph_from_mask(n, mask);
            let ge = gallai_edmonds(&g).unwrap();
            let report = verify_gallai_edmonds(&g, &ge);
            assert!(report.ok, "n={n} mask={mask}: {:?}", report.failure);
        }
    }
}

#[test]
fn verifier_rejects_broken_pairs() {
    let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
    let mut ge = gallai_edmonds(&p3).unwrap();
    ge.m.clear();
    assert!(!verify_gallai_edmonds(&p3, &ge).ok);
    let c4 = cycle(4);
    let mut fake = gallai_edmonds(&c4).unwrap();
    fake.q = VertexSet::new();
    fake.m.clear();
    fake.components = vec![c4.vertices()];
    fake.certificates = vec![Vec::new()];
    assert!(!verify_gallai_edmonds(&c4, &fake).ok);
}

fn k44() -> (Graph, SetPair) {
    let edges: Vec<Edge> = (0..4).flat_map(|a| (4..8).map(move |b| (a, b))).collect();
    (Graph::new(8, &edges).unwrap(), SetPair::new(VertexSet::range(0, 4), VertexSet::range(4, 8)))
}

#[test]
fn regularized_matching_examples() {
    let (g, pair) = k44();
    let opts = CertifyOptions::default();
    let empty = RegularizedMatching::default();
    assert!(verify_regularized_matching(&g, &empty, &rat(1, 4), &int(1), 4, &opts).unwrap().valid);
    let one = RegularizedMatching::new(vec![pair.clone()]);
    assert!(verify_regularized_matching(&g, &one, &rat(1, 4), &int(1), 4, &opts).unwrap().valid);
    let clash = RegularizedMatching::new(vec![
        SetPair::new(VertexSet::from(vec![0, 1]), VertexSet::from(vec![4, 5])),
        SetPair::new(VertexSet::from(vec![1, 2]), VertexSet::from(vec![6, 7])),
    ]);
    let verdict = verify_regularized_matching(&g, &clash, &rat(1, 4), &int(1), 1, &opts).unwrap();
    assert!(!verdict.valid && !verdict.disjoint);
    assert_eq!(verdict.overlap.map(|o| o.0), Some(1));
}

#[test]
fn accessors_and_orientation() {
    let (_, pair) = k44();
    let m = RegularizedMatching::new(vec![pair.clone()]);
    let acc = m.accessors();
    assert_eq!(acc.v1, pair.a);
    assert_eq!(acc.v2, pair.b);
    assert_eq!(acc.v.len(), 8);
    let rev = m.reversed().accessors();
    assert_eq!(rev.v1, acc.v2);
    assert_eq!(rev.v2, acc.v1);
    assert!(RegularizedMatching::default().accessors().v.is_empty());
}

#[test]
fn absorption() {
    let (g, pair) = k44();
    let m = RegularizedMatching::new(vec![pair.clone()]);
    assert!(absorbs(&m, &m));
    assert!(absorbs(&m, &RegularizedMatching::default()));
    let sub = RegularizedMatching::new(vec![SetPair::new(VertexSet::from(vec![0, 1]), VertexSet::from(vec![5, 6]))]);
    assert!(absorbs(&m, &sub));
    assert!(!absorbs(&m, &sub.reversed()));
    let spot = DenseSpot::induced(&g, pair.a.clone(), pair.b.clone());
    assert!(spots_absorb(std::slice::from_ref(&spot), &sub));
    assert!(spots_absorb(std::slice::from_ref(&spot), &sub.reversed()));
}

#[test]
fn cluster_size_bound_examples() {
    let (g, pair) = k44();
    let m = RegularizedMatching::new(vec![pair]);
    assert!(check_cluster_size_bound(&g, &m, &int(1)).ok);
    assert!(check_cluster_size_bound(&g, &m, &rat(1, 2)).ok);
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::ANY, n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<Edge> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ge_always_reverifies(g in arb_graph(12)) {
        let ge = gallai_edmonds(&g).unwrap();
        let report = verify_gallai_edmonds(&g, &ge);
        prop_assert!(report.ok, "{:?}", report.failure);
        prop_assert_eq!(ge.m.len(), ge.q.len());
    }

    #[test]
    fn factor_critical_implies_odd_order(g in arb_graph(9)) {
        if is_factor_critical(&g).factor_critical {
            prop_assert!(g.n() % 2 == 1);
        }
    }

    #[test]
    fn ge_exists_whenever_oracle_says_so(g in arb_graph(7)) {
        prop_assert!(oracle_ge_exists(&g));
        prop_assert!(verify_gallai_edmonds(&g, &gallai_edmonds(&g).unwrap()).ok);
    }

    #[test]
    fn verified_matchings_obey_cluster_bound(
        n in 4usize..12,
        bits in proptest::collection::vec(proptest::bool::ANY, 66),
        size in 1usize..4,
    ) {
        let mut edges = Vec::new();
        let mut i = 0;
        for u in 0..n { for v in u + 1..n { if bits[i % bits.len()] { edges.push((u, v)); } i += 1; } }
        let g = Graph::new(n, &edges).unwrap();
        let size = size.min(n / 2);
        let pair = SetPair::new(VertexSet::range(0, size), VertexSet::range(size, 2 * size));
        let m = RegularizedMatching::new(vec![pair]);
        let d = lks_core::regularity::density(&g, &m.pairs[0].a, &m.pairs[0].b).unwrap();
        let verdict = verify_regularized_matching(&g, &m, &rat(1, 2), &d, 1, &CertifyOptions::default()).unwrap();
        if verdict.valid && d > int(0) {
            prop_assert!(check_cluster_size_bound(&g, &m, &d).ok);
        }
    }

    #[test]
    fn reversing_swaps_projections(k in 1usize..5) {
        let pairs: Vec<SetPair> = (0..k)
            .map(|i| SetPair::new(VertexSet::from(vec![4 * i, 4 * i + 1]), VertexSet::from(vec![4 * i + 2, 4 * i + 3])))
            .collect();
        let m = RegularizedMatching::new(pairs);
        prop_assert_eq!(m.reversed().v1(), m.v2());
        prop_assert_eq!(m.reversed().v2(), m.v1());
    }
}
