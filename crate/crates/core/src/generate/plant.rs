//! Blown-up cluster graphs: every cluster-level edge becomes a complete
//! bipartite graph between two groups of equal size.

use rand::Rng;
use serde::Serialize;

use crate::dense::{DecompositionParams, DenseSpot, SparseDecomposition};
use crate::error::{Error, Result};
use crate::graph::{norm_edge, Edge, Graph, VertexSet};
use crate::lks::check_lks_small_membership;
use crate::rational::{ceil_usize, int, rat, Rational};

use super::wiring::{bipartite_greedy, havel_hakimi};

/// Group counts; `None` fields are drawn from the seed.
#[derive(Debug, Clone)]
pub struct PlantSpec {
    /// Upper bound on the number of vertices when counts are drawn.
    pub n: usize,
    pub k: usize,
    pub eta: Rational,
    pub gamma: Rational,
    pub group_size: usize,
    pub large_clusters: Option<usize>,
    pub small_clusters: Option<usize>,
    pub avoiding_groups: Option<usize>,
}

impl Default for PlantSpec {
    fn default() -> Self {
        PlantSpec {
            n: 80,
            k: 10,
            eta: rat(1, 5),
            gamma: rat(1, 4),
            group_size: 4,
            large_clusters: None,
            small_clusters: None,
            avoiding_groups: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PlantAudit {
    pub large_clusters: usize,
    pub small_clusters: usize,
    pub avoiding_groups: usize,
    /// Cluster-level degree of every large group.
    pub large_degree: usize,
    pub cluster_edges: usize,
    pub attempts: usize,
    pub lks_small: bool,
}

const ATTEMPTS: usize = 32;

/// Cluster-level wiring: (small degree per small cluster, avoiding-small,
/// large-small, large-large edges) in group indices, or None to retry.
#[allow(clippy::type_complexity)]
fn wire<R: Rng>(
    a: usize,
    b: usize,
    e: usize,
    large_degree: usize,
    rng: &mut R,
) -> Option<(Vec<Edge>, Vec<Edge>, Vec<Edge>)> {
    // Small clusters take degree 1 or 2 with enough room for the avoiding groups.
    let mut small_deg = vec![2usize; b];
    let floor = large_degree * e;
    let mut total = 2 * b;
    for d in small_deg.iter_mut() {
        if total > floor.max(1) && rng.gen_bool(0.5) {
            *d = 1;
            total -= 1;
        }
    }
    let to_large = total.checked_sub(floor)?;
    if to_large > large_degree * a || (large_degree * a - to_large) % 2 == 1 {
        // Flip one small cluster to fix parity or overflow.
        let i = small_deg.iter().position(|&d| d == 2 && total > floor)?;
        small_deg[i] = 1;
        total -= 1;
    }
    let to_large = total - floor;
    if to_large > large_degree * a || (large_degree * a - to_large) % 2 == 1 {
        return None;
    }
    let avoiding_small = bipartite_greedy(&vec![large_degree; e], &small_deg, rng)?;
    let mut rest = small_deg.clone();
    for &(_, s) in &avoiding_small {
        rest[s] -= 1;
    }
    let small_large = bipartite_greedy(&rest, &vec![large_degree; a], rng)?;
    let mut large_rest = vec![large_degree; a];
    for &(_, l) in &small_large {
        large_rest[l] -= 1;
    }
    let large_large = havel_hakimi(&large_rest, rng)?;
    let large_small = small_large.into_iter().map(|(s, l)| (l, s)).collect();
    Some((avoiding_small, large_small, large_large))
}

/// Builds the blown-up graph with clusters for the large and small
/// groups, the avoiding set formed by the remaining groups, one spot per
/// cluster-level edge and G_reg equal to the cluster-cluster edges.
pub fn cluster_plant<R: Rng>(spec: &PlantSpec, rng: &mut R) -> Result<(Graph, SparseDecomposition, PlantAudit)> {
    let c = spec.group_size;
    let k = spec.k;
    if c == 0 || k == 0 {
        return Err(Error::Input("k and the group size must be positive".into()));
    }
    let large_degree = ceil_usize(&((int(1) + &spec.eta) * int(k))).div_ceil(c);
    if large_degree * c != ceil_usize(&((int(1) + &spec.eta) * int(k))) {
        return Err(Error::Input(format!("group size {c} must divide ceil((1 + eta) k)")));
    }
    let groups = spec.n / c;
    let b = match spec.small_clusters {
        Some(b) => b,
        None => rng.gen_range(2..=(3 * groups / 10).max(2)),
    };
    let e = match spec.avoiding_groups {
        Some(e) => e,
        None => {
            let most = if b >= large_degree { 2 * b / large_degree.max(1) } else { 0 };
            let e = rng.gen_range(1.min(most)..=most);
            // Filling every small slot leaves no room to fix the parity of the large degrees.
            if e > 0 && large_degree * e == 2 * b {
                e - 1
            } else {
                e
            }
        }
    };
    let a = match spec.large_clusters {
        Some(a) => a,
        None => groups.saturating_sub(b + e),
    };
    // |L| ≥ (1/2 + eta) n in group units.
    if int(a + e) < (rat(1, 2) + &spec.eta) * int(a + b + e) {
        return Err(Error::Input(format!("{a} large and {e} avoiding groups are too few for {b} small clusters")));
    }
    if large_degree * e > 2 * b {
        return Err(Error::Input(format!(
            "{e} avoiding groups need {} small slots, only {} exist",
            large_degree * e,
            2 * b
        )));
    }
    if e > 0 && b < large_degree {
        return Err(Error::Input(format!("an avoiding group needs {large_degree} small clusters, only {b} exist")));
    }
    let mut attempts = 0;
    let (avoiding_small, large_small, large_large) = loop {
        attempts += 1;
        if let Some(w) = wire(a, b, e, large_degree, rng) {
            break w;
        }
        if attempts == ATTEMPTS {
            return Err(Error::Input(format!("no simple wiring for a = {a}, b = {b}, e = {e}")));
        }
    };

    // Groups: small clusters first, then large clusters, then avoiding groups.
    let group = |i: usize| VertexSet::range(i * c, (i + 1) * c);
    let small_id = |s: usize| s;
    let large_id = |l: usize| b + l;
    let avoid_id = |x: usize| b + a + x;
    let mut level: Vec<Edge> = Vec::new();
    level.extend(avoiding_small.iter().map(|&(x, s)| (avoid_id(x), small_id(s))));
    level.extend(large_small.iter().map(|&(l, s)| (large_id(l), small_id(s))));
    level.extend(large_large.iter().map(|&(x, y)| (large_id(x), large_id(y))));
    let n = c * (a + b + e);
    let mut edges = Vec::new();
    let mut spots = Vec::new();
    let mut greg = Vec::new();
    for &(x, y) in &level {
        let (gx, gy) = (group(x), group(y));
        let f: Vec<Edge> = gx.iter().flat_map(|&u| gy.iter().map(move |&v| norm_edge(u, v))).collect();
        edges.extend(&f);
        if x < b + a && y < b + a {
            greg.extend(&f);
        }
        spots.push(DenseSpot::new(gx, gy, f));
    }
    let g = Graph::new(n, &edges)?;
    let clusters: Vec<VertexSet> = (0..b + a).map(group).collect();
    let avoiding = VertexSet::range((b + a) * c, n);
    let gamma = spec.gamma.clone();
    let size_ratio = Rational::new(c.into(), k.into());
    let nabla = SparseDecomposition {
        huge: VertexSet::new(),
        clusters,
        spots,
        greg,
        gexp: Vec::new(),
        avoiding,
        params: DecompositionParams {
            k,
            omega_star_star: int(3),
            omega_star: rat(3, 2),
            lambda: &gamma * &gamma,
            epsilon: size_ratio.clone(),
            nu: size_ratio,
            rho: &gamma * &gamma,
            gamma,
            b: None,
        },
    };
    let audit = PlantAudit {
        large_clusters: a,
        small_clusters: b,
        avoiding_groups: e,
        large_degree,
        cluster_edges: level.len(),
        attempts,
        lks_small: check_lks_small_membership(&g, n, k, &spec.eta)?.member,
    };
    Ok((g, nabla, audit))
}
