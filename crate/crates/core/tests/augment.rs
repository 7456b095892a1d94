use lks_core::augment::{
    augment_or_separate, find_augmenting_or_separate, find_regular_pair_in_spot, grow_matching, path_thresholds,
    separate, validate_path, AugmentOutcome, AugmentParams, ExtractOptions, SeparateParams, SeparationOrPath,
    StopReason,
};
use lks_core::dense::{BipartiteHost, DenseSpot, Instance, InstanceParams};
use lks_core::graph::{Edge, Graph, VertexSet};
use lks_core::matching::{RegularizedMatching, SetPair};
use lks_core::rational::{int, rat, Rational};
use lks_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn complete_bipartite(xs: &[usize], ys: &[usize]) -> Vec<Edge> {
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect()
}

fn range(lo: usize, hi: usize) -> VertexSet {
    VertexSet::range(lo, hi)
}

fn ids(lo: usize, hi: usize) -> Vec<usize> {
    (lo..hi).collect()
}

fn params(k: usize, omega: Rational, tau: Rational) -> InstanceParams {
    InstanceParams { k, omega, rho: rat(1, 2), nu: rat(1, 2), tau }
}

fn options(inst: &Instance<'_>) -> ExtractOptions {
    ExtractOptions::for_instance(inst, rat(1, 4), &rat(1, 8))
}

/// K_{8,8} on 0..8 and 8..16 with its spot.
fn k88() -> (Graph, Vec<DenseSpot>) {
    let g = Graph::new(16, &complete_bipartite(&ids(0, 8), &ids(8, 16))).unwrap();
    let spot = DenseSpot::induced(&g, range(0, 8), range(8, 16));
    (g, vec![spot])
}

/// Edge count between two sets by direct adjacency queries.
fn count_edges(g: &Graph, xs: &VertexSet, ys: &VertexSet) -> usize {
    xs.iter().map(|&x| ys.iter().filter(|&&y| g.has_edge(x, y)).count()).sum()
}

#[test]
fn single_spot_yields_full_pair() {
    let (g, spots) = k88();
    let inst = Instance {
        graph: &g,
        cover: &spots,
        host: BipartiteHost::induced(&g, range(0, 8), range(8, 16)),
        ensemble: vec![range(0, 8)],
        params: params(8, int(1), rat(1, 4)),
    };
    let found = find_regular_pair_in_spot(&inst, &options(&inst)).unwrap();
    assert_eq!(found.spot, 0);
    assert_eq!(found.x, range(0, 8));
    assert_eq!(found.y, range(8, 16));
    assert_eq!(found.density, int(1));
}

#[test]
fn empty_host_is_a_precondition_failure() {
    let (g, spots) = k88();
    let inst = Instance {
        graph: &g,
        cover: &spots,
        host: BipartiteHost { a: range(0, 8), b: range(8, 16), edges: Vec::new() },
        ensemble: vec![range(0, 8)],
        params: params(8, int(1), rat(1, 4)),
    };
    assert!(matches!(find_regular_pair_in_spot(&inst, &options(&inst)), Err(Error::Precondition(_))));
}

#[test]
fn averaging_picks_the_spot_carrying_the_host() {
    let mut edges = complete_bipartite(&ids(0, 4), &ids(4, 8));
    edges.extend(complete_bipartite(&ids(8, 12), &ids(12, 16)));
    let g = Graph::new(16, &edges).unwrap();
    let spots =
        vec![DenseSpot::induced(&g, range(0, 4), range(4, 8)), DenseSpot::induced(&g, range(8, 12), range(12, 16))];
    let inst = Instance {
        graph: &g,
        cover: &spots,
        host: BipartiteHost::induced(&g, range(8, 12), range(12, 16)),
        ensemble: vec![range(0, 4), range(8, 12)],
        params: params(4, int(1), rat(1, 4)),
    };
    let found = find_regular_pair_in_spot(&inst, &options(&inst)).unwrap();
    assert_eq!(found.spot, 1);
    assert_eq!(found.ensemble_set, 1);
    assert!(found.x.is_subset(&range(8, 12)) && found.y.is_subset(&range(12, 16)));
}

#[test]
fn grow_covers_k88_with_one_pair() {
    let (g, spots) = k88();
    let inst = Instance {
        graph: &g,
        cover: &spots,
        host: BipartiteHost::induced(&g, range(0, 8), range(8, 16)),
        ensemble: vec![range(0, 8)],
        params: params(8, int(1), rat(1, 4)),
    };
    let grown = grow_matching(&inst, &options(&inst)).unwrap();
    assert_eq!(grown.matching.pairs, vec![SetPair::new(range(0, 8), range(8, 16))]);
    assert!(matches!(grown.stop, StopReason::ResidualEmpty));
    assert!(grown.size_bound_met && grown.guarantee_met());
}

#[test]
fn grow_on_edgeless_host_is_empty() {
    let (g, spots) = k88();
    let inst = Instance {
        graph: &g,
        cover: &spots,
        host: BipartiteHost { a: range(0, 4), b: range(4, 8), edges: Vec::new() },
        ensemble: vec![range(0, 4)],
        params: params(8, int(1), rat(1, 4)),
    };
    let grown = grow_matching(&inst, &options(&inst)).unwrap();
    assert!(grown.matching.is_empty());
    assert_eq!(grown.residual_edges, 0);
    assert!(grown.residual_certificate);
}

#[test]
fn grow_on_two_components_gives_two_pairs() {
    let mut edges = complete_bipartite(&ids(0, 6), &ids(6, 12));
    edges.extend(complete_bipartite(&ids(12, 18), &ids(18, 24)));
    let g = Graph::new(24, &edges).unwrap();
    let spots =
        vec![DenseSpot::induced(&g, range(0, 6), range(6, 12)), DenseSpot::induced(&g, range(12, 18), range(18, 24))];
    let a_side = range(0, 6).union(&range(12, 18));
    let b_side = range(6, 12).union(&range(18, 24));
    let inst = Instance {
        graph: &g,
        cover: &spots,
        host: BipartiteHost::induced(&g, a_side, b_side),
        ensemble: vec![range(0, 6), range(12, 18)],
        params: params(6, int(1), rat(1, 4)),
    };
    let grown = grow_matching(&inst, &options(&inst)).unwrap();
    assert_eq!(grown.matching.len(), 2);
    for p in &grown.matching.pairs {
        assert!(inst.ensemble.iter().any(|a| p.a.is_subset(a)));
        assert!(spots.iter().any(|s| p.a.is_subset(&s.u) && p.b.is_subset(&s.w)));
    }
}

#[test]
fn small_y0_separates_with_empty_submatching() {
    let (g, _) = k88();
    let out = find_augmenting_or_separate(
        &g,
        &rat(1, 4),
        &int(1),
        8,
        &RegularizedMatching::default(),
        &range(8, 9),
        &[range(0, 8)],
    )
    .unwrap();
    match out {
        SeparationOrPath::M1 { pairs, crossing_edges, .. } => {
            assert!(pairs.is_empty());
            assert_eq!(crossing_edges, 8);
        }
        other => panic!("expected a separation, got {other:?}"),
    }
}

#[test]
fn bridge_gives_a_length_zero_path() {
    let (g, _) = k88();
    let out = find_augmenting_or_separate(
        &g,
        &rat(1, 4),
        &int(1),
        8,
        &RegularizedMatching::default(),
        &range(8, 16),
        &[range(0, 8)],
    )
    .unwrap();
    match out {
        SeparationOrPath::M2 { path } => {
            assert_eq!(path.len(), 0);
            assert!(validate_path(&g, &RegularizedMatching::default(), &path).ok);
        }
        other => panic!("expected a path, got {other:?}"),
    }
}

#[test]
fn no_bridge_separates() {
    let (g, _) = k88();
    let out = find_augmenting_or_separate(
        &g,
        &rat(1, 4),
        &int(1),
        8,
        &RegularizedMatching::default(),
        &range(8, 16),
        &[range(16, 16)],
    )
    .unwrap();
    assert!(matches!(out, SeparationOrPath::M1 { ref pairs, crossing_edges: 0, .. } if pairs.is_empty()));
}

fn desk(omega: usize, k: usize, tau: Rational) -> AugmentParams {
    AugmentParams::desk(int(omega), k, tau, rat(1, 2), rat(1, 2)).unwrap()
}

#[test]
fn augment_small_y_separates() {
    let (g, spots) = k88();
    let out = augment_or_separate(
        &g,
        &spots,
        &RegularizedMatching::default(),
        &[range(8, 9)],
        &[range(0, 8)],
        &desk(1, 8, rat(1, 4)),
    )
    .unwrap();
    assert!(matches!(out, AugmentOutcome::Separated { ref pairs, .. } if pairs.is_empty()));
}

#[test]
fn augment_over_a_bridge_builds_the_pair_directly() {
    let (g, spots) = k88();
    let out = augment_or_separate(
        &g,
        &spots,
        &RegularizedMatching::default(),
        &[range(8, 16)],
        &[range(0, 8)],
        &desk(1, 8, rat(1, 4)),
    )
    .unwrap();
    let AugmentOutcome::Improved(imp) = out else { panic!("expected an improvement") };
    assert_eq!(imp.matching.pairs, vec![SetPair::new(range(0, 8), range(8, 16))]);
    assert_eq!(imp.path.len(), 0);
    assert_eq!(imp.gain, 16);
    assert_eq!(imp.lost, 0);
    assert!(imp.loss_ok && imp.gain_ok && imp.nesting_ok && imp.regularity.valid);
}

/// A two-level instance: pair (0..4, 4..8) already matched, Y = 8..12
/// adjacent to 0..4, and the target 12..16 adjacent to 4..8.
fn two_level() -> (Graph, Vec<DenseSpot>, RegularizedMatching) {
    let mut edges = complete_bipartite(&ids(0, 4), &ids(4, 8));
    edges.extend(complete_bipartite(&ids(0, 4), &ids(8, 12)));
    edges.extend(complete_bipartite(&ids(12, 16), &ids(4, 8)));
    let g = Graph::new(16, &edges).unwrap();
    let spots =
        vec![DenseSpot::induced(&g, range(0, 4), range(4, 12)), DenseSpot::induced(&g, range(4, 8), range(12, 16))];
    let m = RegularizedMatching::new(vec![SetPair::new(range(0, 4), range(4, 8))]);
    (g, spots, m)
}

#[test]
fn augment_along_a_path_recounts() {
    let (g, spots, m) = two_level();
    let out = augment_or_separate(&g, &spots, &m, &[range(8, 12)], &[range(12, 16)], &desk(1, 8, rat(1, 4))).unwrap();
    let AugmentOutcome::Improved(imp) = out else { panic!("expected an improvement") };
    assert_eq!(imp.path.len(), 1);
    let before = m.vertex_set();
    let after = imp.matching.vertex_set();
    let lost = before.iter().filter(|v| !after.contains(**v)).count();
    assert_eq!(imp.lost, lost);
    assert_eq!(imp.gain, after.len() as i64 - before.len() as i64);
    assert_eq!(after.len(), 16);
    assert!(imp.loss_ok && imp.nesting_ok);
}

#[test]
fn separate_trivial() {
    let (g, spots) = k88();
    let p = SeparateParams::new(int(1), 8, rat(1, 2), rat(1, 2));
    let r = separate(&g, &spots, &RegularizedMatching::default(), &[], &VertexSet::new(), &p).unwrap();
    assert!(r.m_prime.is_empty() && r.m1.is_empty() && r.m2.is_empty());
    assert!(r.rounds.is_empty());
    assert!(r.verified.i && r.verified.ii && r.verified.iii);
}

#[test]
fn separate_single_round_keeps_matching() {
    let (g, spots) = k88();
    let m = RegularizedMatching::new(vec![SetPair::new(range(0, 8), range(8, 16))]);
    let p = SeparateParams::new(int(1), 8, rat(1, 2), rat(1, 2));
    let r = separate(&g, &spots, &m, &[], &VertexSet::new(), &p).unwrap();
    assert_eq!(r.m_prime.pairs, m.pairs);
    assert!(r.m1.is_empty());
    assert_eq!(r.m2.pairs, m.pairs);
    assert!(r.verified.i && r.verified.ii && r.verified.iii);
}

#[test]
fn separate_after_one_augmentation() {
    let (g, spots) = k88();
    let p = SeparateParams::new(int(1), 8, rat(1, 2), rat(1, 2));
    let r = separate(&g, &spots, &RegularizedMatching::default(), &[range(0, 8)], &range(8, 16), &p).unwrap();
    assert_eq!(r.rounds.len(), 1);
    assert_eq!(r.m_prime.pairs, vec![SetPair::new(range(0, 8), range(8, 16))]);
    assert!(r.verified.i && r.verified.ii && r.verified.iii);
    assert_eq!(r.verified.crossing_edges, 0);
}

#[test]
fn separate_rejects_overlapping_inputs() {
    let (g, spots) = k88();
    let p = SeparateParams::new(int(1), 8, rat(1, 2), rat(1, 2));
    let err = separate(&g, &spots, &RegularizedMatching::default(), &[range(0, 8)], &range(4, 16), &p).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}

/// Random graph with a random matching of disjoint equal-size pairs and
/// disjoint Y0 and target sets.
struct Random {
    g: Graph,
    matching: RegularizedMatching,
    y0: VertexSet,
    target: Vec<VertexSet>,
    k: usize,
    tau: Rational,
}

fn random_instance(seed: u64) -> Random {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(8..=300);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut cursor = 0;
    let mut take = |count: usize| {
        let s: VertexSet = order[cursor..(cursor + count).min(n)].iter().copied().collect();
        cursor = (cursor + count).min(n);
        s
    };
    let pair_size = if seed.is_multiple_of(3) { (n / 8).max(1) } else { rng.gen_range(1..=(n / 8).max(1)) };
    let pairs = rng.gen_range(0..=3);
    let matching = RegularizedMatching::new(
        (0..pairs)
            .map(|_| SetPair::new(take(pair_size), take(pair_size)))
            .filter(|p| p.a.len() == p.b.len() && !p.a.is_empty())
            .collect(),
    );
    let y0 = take(rng.gen_range(0..=n / 3));
    let target = vec![take(rng.gen_range(0..=n / 4)), take(rng.gen_range(0..=n / 8))];

    let planted = seed.is_multiple_of(3);
    let p: f64 = if planted { rng.gen_range(0.0..0.02) } else { rng.gen_range(0.02..0.5) };
    let budget = if n > 120 { 6000 } else { usize::MAX };
    let mut edges = Vec::new();
    'outer: for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
                if edges.len() >= budget {
                    break 'outer;
                }
            }
        }
    }
    // A third of the seeds plant a chain Y0 -> A_1, B_1 -> A_2, ..., B_last -> target.
    if planted {
        let mut prev = y0.clone();
        for pair in &matching.pairs {
            edges.extend(complete_bipartite(pair.a.as_slice(), prev.as_slice()));
            prev = pair.b.clone();
        }
        edges.extend(complete_bipartite(target[0].as_slice(), prev.as_slice()));
    }
    let g = Graph::from_edges_lossy(n, edges);
    let k = g.max_degree().max(1);
    let tau = rat(rng.gen_range(1..20), 20);
    Random { g, matching, y0, target, k, tau }
}

#[test]
fn dichotomy_is_sound_on_random_instances() {
    let (mut m1, mut m2, mut long) = (0, 0, 0);
    for seed in 0..500 {
        let r = random_instance(seed);
        let out = find_augmenting_or_separate(&r.g, &r.tau, &int(1), r.k, &r.matching, &r.y0, &r.target).unwrap();
        let n = r.g.n();
        match out {
            SeparationOrPath::M1 { pairs, crossing_edges, path, .. } => {
                m1 += 1;
                let mut left = VertexSet::union_all(&r.target);
                let mut right = r.y0.clone();
                for (i, p) in r.matching.pairs.iter().enumerate() {
                    if pairs.contains(&i) {
                        right = right.union(&p.b);
                    } else {
                        left = left.union(&p.a);
                    }
                }
                let count = count_edges(&r.g, &left, &right);
                assert_eq!(count, crossing_edges, "seed {seed}");
                assert!(int(count) < &r.tau * int(n) * int(r.k), "seed {seed}");
                if let Some(path) = path {
                    assert!(validate_path(&r.g, &r.matching, &path).ok, "seed {seed}");
                }
            }
            SeparationOrPath::M2 { path } => {
                m2 += 1;
                long += usize::from(!path.is_empty());
                let report = validate_path(&r.g, &r.matching, &path);
                assert!(report.ok, "seed {seed}: {:?}", report.failure);
                assert_eq!(report.target_ok, Some(true));
                assert!(int(path.len()) <= int(2) / &r.tau, "seed {seed}");
                let (delta, s, t) = path_thresholds(&r.tau, &int(1), r.k);
                assert_eq!((path.delta, path.s, path.t), (delta, s, t));
            }
        }
    }
    assert!(m1 > 0 && m2 > 0, "both outcomes should occur: {m1} {m2}");
    assert!(long > 0, "some path should have a level: {long}");
}

#[test]
fn path_levels_are_disjoint_and_exact() {
    for seed in 500..700 {
        let r = random_instance(seed);
        let out = find_augmenting_or_separate(&r.g, &r.tau, &int(1), r.k, &r.matching, &r.y0, &r.target).unwrap();
        let path = match out {
            SeparationOrPath::M1 { path: Some(p), .. } | SeparationOrPath::M2 { path: p } => p,
            _ => continue,
        };
        let mut seen = std::collections::HashSet::new();
        for level in &path.levels {
            for &i in &level.pairs {
                assert!(seen.insert(i), "seed {seed}: pair {i} on two levels");
            }
            let y = VertexSet::union_all(level.pairs.iter().map(|&i| &r.matching.pairs[i].b));
            assert_eq!(y, level.y);
        }
        assert!(path.y0.is_disjoint(&r.matching.vertex_set()));
    }
}

/// Disjoint random dense bipartite blocks, each its own spot.
fn block_instance(seed: u64) -> (Graph, Vec<DenseSpot>, VertexSet, VertexSet, Vec<VertexSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = rng.gen_range(1..=3);
    let mut edges = Vec::new();
    let mut sides = Vec::new();
    let mut next = 0;
    for _ in 0..blocks {
        let a = rng.gen_range(3..=8);
        let b = rng.gen_range(3..=8);
        let p: f64 = rng.gen_range(0.6..1.0);
        for x in next..next + a {
            for y in next + a..next + a + b {
                if rng.gen_bool(p) {
                    edges.push((x, y));
                }
            }
        }
        sides.push((range(next, next + a), range(next + a, next + a + b)));
        next += a + b;
    }
    let g = Graph::new(next, &edges).unwrap();
    let spots: Vec<DenseSpot> = sides.iter().map(|(u, w)| DenseSpot::induced(&g, u.clone(), w.clone())).collect();
    let a_side = VertexSet::union_all(sides.iter().map(|s| &s.0));
    let b_side = VertexSet::union_all(sides.iter().map(|s| &s.1));
    let ensemble = sides.iter().map(|s| s.0.clone()).collect();
    (g, spots, a_side, b_side, ensemble)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grow_is_monotone(seed in any::<u64>()) {
        let (g, spots, a_side, b_side, ensemble) = block_instance(seed);
        let k = g.max_degree().max(1);
        let inst = Instance {
            graph: &g,
            cover: &spots,
            host: BipartiteHost::induced(&g, a_side, b_side),
            ensemble,
            params: params(k, int(1), rat(1, 4)),
        };
        let opts = options(&inst);
        let grown = grow_matching(&inst, &opts).unwrap();
        let mut covered = VertexSet::new();
        for (found, pair) in grown.extractions.iter().zip(&grown.matching.pairs) {
            prop_assert_eq!(&found.x, &pair.a);
            prop_assert_eq!(&found.y, &pair.b);
            prop_assert!(covered.is_disjoint(&pair.vertices()));
            let before = covered.len();
            covered = covered.union(&pair.vertices());
            prop_assert!(covered.len() >= before + 2 * opts.min_size);
            prop_assert!(found.density >= opts.min_density);
        }
        prop_assert_eq!(
            grown.residual_edges,
            count_edges(&g, &inst.host.a.difference(&grown.matching.v1()), &inst.host.b.difference(&grown.matching.v2()))
        );
    }

    #[test]
    fn separate_reverifies(seed in any::<u64>()) {
        let (g, spots, a_side, b_side, _) = block_instance(seed);
        let k = g.max_degree().max(1);
        let p = SeparateParams::new(int(1), k, rat(1, 2), rat(1, 2));
        match separate(&g, &spots, &RegularizedMatching::default(), &spots.iter().map(|s| s.u.clone()).collect::<Vec<_>>(), &b_side, &p) {
            Ok(r) => {
                prop_assert!(r.verified.i && r.verified.ii && r.verified.iii);
                let bound: u64 = r.round_bound.parse().unwrap_or(u64::MAX);
                prop_assert!((r.rounds.len() as u64) < bound);
                let lost = VertexSet::new().difference(&r.m_prime.vertex_set()).len();
                prop_assert_eq!(lost, r.verified.lost);
                prop_assert!(r.m_prime.vertex_set().is_subset(&a_side.union(&b_side)));
            }
            Err(Error::NoPairFound(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}
