//! A graph whose large vertices all lie in the avoiding set and whose
//! small vertices form clusters spanning no dense regular pair, so the
//! cluster graph is empty while crossing spots still carry a large
//! matching.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::dense::{DecompositionParams, DenseSpot, SparseDecomposition};
use crate::error::{Error, Result};
use crate::graph::{norm_edge, Edge, Graph, VertexSet};
use crate::lks::{check_lks_membership, check_lks_small_membership, classify_ls};
use crate::rational::{ceil_usize, int, rat, Rational};

use super::wiring::{bipartite_greedy, even_split};

#[derive(Debug, Clone)]
pub struct Figure2Spec {
    pub n: usize,
    pub k: usize,
    pub cluster_size: usize,
    pub eta: Rational,
    pub gamma: Rational,
}

impl Default for Figure2Spec {
    fn default() -> Self {
        Figure2Spec { n: 200, k: 20, cluster_size: 4, eta: rat(1, 20), gamma: rat(1, 5) }
    }
}

/// Recount of the degree targets on the generated graph.
#[derive(Debug, Clone, Serialize)]
pub struct Figure2Audit {
    pub large_target: usize,
    pub small_target: usize,
    pub large_to_large: usize,
    pub large_to_small: usize,
    /// Range of the large-side degrees.
    pub large_degrees: (usize, usize),
    /// Range of the degrees of small vertices (all into the large side).
    pub small_degrees: (usize, usize),
    pub large_into_large: (usize, usize),
    pub large_into_small: (usize, usize),
    /// All degrees within one of their targets.
    pub within_tolerance: bool,
    /// The intended parts coincide with the degree classes.
    pub classes_match: bool,
    pub lks: bool,
    pub lks_small: bool,
}

fn round(r: &Rational) -> usize {
    ceil_usize(&(r - rat(1, 2)))
}

fn range(values: impl Iterator<Item = usize>) -> (usize, usize) {
    values.fold((usize::MAX, 0), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Builds the graph and its decomposition. Small vertices are 0..|S| in
/// consecutive clusters, large vertices follow.
pub fn figure2_family<R: Rng>(spec: &Figure2Spec, rng: &mut R) -> Result<(Graph, SparseDecomposition, Figure2Audit)> {
    let Figure2Spec { n, k, cluster_size: c, eta, gamma } = spec;
    let (n, k, c) = (*n, *k, *c);
    if c == 0 || k == 0 || n == 0 {
        return Err(Error::Input("n, k and the cluster size must be positive".into()));
    }
    if !(gamma > &int(0) && gamma < &int(1)) {
        return Err(Error::Domain(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    let to_large = round(&(rat(7, 10) * int(k)));
    let to_small = round(&(rat(2, 5) * int(k)));
    let small_target = round(&(rat(1, 2) * int(k)));
    if !to_small.is_multiple_of(c) || to_small == 0 {
        return Err(Error::Input(format!("the cluster size {c} must divide the small-side degree {to_small}")));
    }
    let per_vertex = to_small / c;
    let n_small = c * round(&(Rational::new((4 * n).into(), (9 * c).into())));
    if n_small == 0 || n_small >= n {
        return Err(Error::Input(format!("n = {n} leaves no room for both sides")));
    }
    let n_large = n - n_small;
    let clusters: Vec<VertexSet> = (0..n_small / c).map(|i| VertexSet::range(i * c, (i + 1) * c)).collect();
    if clusters.len() < per_vertex {
        return Err(Error::Input(format!("{} clusters cannot host {per_vertex} per large vertex", clusters.len())));
    }
    let mut large: Vec<usize> = (n_small..n).collect();
    large.shuffle(rng);

    let mut edges: Vec<Edge> = Vec::new();
    let mut spots = Vec::new();

    // Large-large spots: 2p parts paired up, each part below to_large / gamma.
    let part_cap = ceil_usize(&(int(to_large) / gamma)) - 1;
    let parts_wanted = ceil_usize(&Rational::new(n_large.into(), (2 * part_cap).into())).max(1);
    let part_sizes = even_split(n_large, 2 * parts_wanted, rng);
    if part_sizes.iter().any(|&s| s < to_large) {
        return Err(Error::Input(format!("large parts of size {part_sizes:?} cannot carry degree {to_large}")));
    }
    let mut cursor = 0;
    let mut parts = Vec::new();
    for s in part_sizes {
        parts.push(large[cursor..cursor + s].to_vec());
        cursor += s;
    }
    for pair in parts.chunks(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let total = round(&(Rational::new((to_large * (left.len() + right.len())).into(), 2.into())));
        let demand = even_split(total, left.len(), rng);
        let capacity = even_split(total, right.len(), rng);
        let wiring = bipartite_greedy(&demand, &capacity, rng)
            .ok_or_else(|| Error::Input("large-large degree sequence is not realisable".into()))?;
        let f: Vec<Edge> = wiring.into_iter().map(|(i, j)| norm_edge(left[i], right[j])).collect();
        edges.extend(&f);
        spots.push(DenseSpot::new(left.iter().copied().collect(), right.iter().copied().collect(), f));
    }

    // Large-small spots: blocks of clusters with proportional large blocks.
    let block_cap = ceil_usize(&(int(to_small) / (gamma * int(c)))) - 1;
    let blocks = clusters.len().div_ceil(block_cap);
    let block_sizes = even_split(clusters.len(), blocks, rng);
    let mut large_sizes: Vec<usize> = block_sizes.iter().map(|&b| n_large * b / clusters.len()).collect();
    let short = n_large - large_sizes.iter().sum::<usize>();
    for size in large_sizes.iter_mut().take(short) {
        *size += 1;
    }
    let (mut cl_cursor, mut l_cursor) = (0, 0);
    large.shuffle(rng);
    for (&nb, &nl) in block_sizes.iter().zip(&large_sizes) {
        let block: Vec<usize> = (cl_cursor..cl_cursor + nb).collect();
        let members = &large[l_cursor..l_cursor + nl];
        cl_cursor += nb;
        l_cursor += nl;
        let capacity = even_split(per_vertex * nl, nb, rng);
        let wiring = bipartite_greedy(&vec![per_vertex; nl], &capacity, rng)
            .ok_or_else(|| Error::Input("large-small cluster incidences are not realisable".into()))?;
        let mut f = Vec::new();
        for (i, j) in wiring {
            for &s in &clusters[block[j]] {
                f.push(norm_edge(members[i], s));
            }
        }
        edges.extend(&f);
        let small_side = VertexSet::union_all(block.iter().map(|&j| &clusters[j]));
        spots.push(DenseSpot::new(members.iter().copied().collect(), small_side, f));
    }

    let g = Graph::new(n, &edges)?;
    let large_set = VertexSet::range(n_small, n);
    let small_set = VertexSet::range(0, n_small);
    let large_mask = large_set.mask(n);
    let small_mask = small_set.mask(n);
    let large_target = to_large + to_small;
    let (lks, lks_small) =
        (check_lks_membership(&g, n, k, eta)?.member, check_lks_small_membership(&g, n, k, eta)?.member);
    let (l_class, _) = classify_ls(&g, k, eta)?;
    let audit = Figure2Audit {
        large_target,
        small_target,
        large_to_large: to_large,
        large_to_small: to_small,
        large_degrees: range(large_set.iter().map(|&v| g.degree(v))),
        small_degrees: range(small_set.iter().map(|&v| g.degree(v))),
        large_into_large: range(large_set.iter().map(|&v| g.deg_into(v, &large_mask))),
        large_into_small: range(large_set.iter().map(|&v| g.deg_into(v, &small_mask))),
        within_tolerance: large_set.iter().all(|&v| g.degree(v).abs_diff(large_target) <= 1)
            && small_set.iter().all(|&v| g.degree(v).abs_diff(small_target) <= 1),
        classes_match: l_class == large_set,
        lks,
        lks_small,
    };
    let nabla = SparseDecomposition {
        huge: VertexSet::new(),
        clusters,
        spots,
        greg: Vec::new(),
        gexp: Vec::new(),
        avoiding: large_set,
        params: DecompositionParams {
            k,
            omega_star_star: int(3),
            omega_star: rat(6, 5),
            lambda: gamma * gamma,
            gamma: gamma.clone(),
            epsilon: Rational::new(c.into(), k.into()),
            nu: Rational::new(c.into(), k.into()),
            rho: gamma * gamma,
            b: None,
        },
    };
    Ok((g, nabla, audit))
}
