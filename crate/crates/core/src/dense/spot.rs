//! Dense spots: bipartite subgraphs (U, W; F) with density above gamma
//! and minimum degree above m.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{norm_edge, Edge, Graph, VertexSet};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseSpot {
    #[serde(rename = "U")]
    pub u: VertexSet,
    #[serde(rename = "W")]
    pub w: VertexSet,
    #[serde(rename = "F")]
    pub f: Vec<Edge>,
}

impl DenseSpot {
    /// Spot with the side holding the smaller id first and sorted edges.
    pub fn new(u: VertexSet, w: VertexSet, f: Vec<Edge>) -> DenseSpot {
        let mut f: Vec<Edge> = f.into_iter().map(|(a, b)| norm_edge(a, b)).collect();
        f.sort_unstable();
        f.dedup();
        let (u, w) = if w.first() < u.first() && !w.is_empty() { (w, u) } else { (u, w) };
        DenseSpot { u, w, f }
    }

    /// All G-edges between the sides.
    pub fn induced(g: &Graph, u: VertexSet, w: VertexSet) -> DenseSpot {
        let f = g.edges_between(&u, &w);
        DenseSpot::new(u, w, f)
    }

    pub fn vertices(&self) -> VertexSet {
        self.u.union(&self.w)
    }

    pub fn density(&self) -> Rational {
        if self.u.is_empty() || self.w.is_empty() {
            return int(0);
        }
        Rational::new(self.f.len().into(), (self.u.len() * self.w.len()).into())
    }

    pub fn graph(&self, n: usize) -> Graph {
        Graph::from_edges_lossy(n, self.f.iter().copied())
    }

    /// Minimum F-degree over U ∪ W.
    pub fn min_degree(&self, n: usize) -> usize {
        let mut deg = vec![0usize; n];
        for &(a, b) in &self.f {
            deg[a] += 1;
            deg[b] += 1;
        }
        self.vertices().iter().map(|&v| deg[v]).min().unwrap_or(0)
    }

    /// Checks shape: disjoint non-empty sides inside `0..n`, F ⊆ E(G)
    /// with each edge crossing between the sides.
    pub fn validate_shape(&self, g: &Graph) -> Result<()> {
        if self.u.is_empty() || self.w.is_empty() {
            return Err(Error::Input("dense spot with an empty side".into()));
        }
        if self.f.is_empty() {
            return Err(Error::Input("dense spot without edges".into()));
        }
        if !self.u.is_disjoint(&self.w) {
            return Err(Error::Input("dense spot sides overlap".into()));
        }
        if let Some(&v) = self.vertices().iter().find(|&&v| v >= g.n()) {
            return Err(Error::Input(format!("dense spot vertex {v} out of range")));
        }
        for &(a, b) in &self.f {
            if !g.has_edge(a, b) {
                return Err(Error::Input(format!("spot edge ({a},{b}) is not an edge of G")));
            }
            let crosses = (self.u.contains(a) && self.w.contains(b)) || (self.u.contains(b) && self.w.contains(a));
            if !crosses {
                return Err(Error::Input(format!("spot edge ({a},{b}) does not cross U, W")));
            }
        }
        Ok(())
    }

    /// Whether a set lies inside one side or avoids both.
    pub fn nests(&self, set: &VertexSet) -> bool {
        let side_ok = |side: &VertexSet| {
            let inter = set.intersection(side).len();
            inter == 0 || inter == set.len()
        };
        side_ok(&self.u) && side_ok(&self.w)
    }

    /// Whether S ⊆ U and T ⊆ W, or the same with the sides swapped.
    pub fn holds_pair(&self, s: &VertexSet, t: &VertexSet) -> bool {
        (s.is_subset(&self.u) && t.is_subset(&self.w)) || (s.is_subset(&self.w) && t.is_subset(&self.u))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpotCheck {
    pub is_spot: bool,
    #[serde(with = "crate::rational::serde_rational")]
    pub density: Rational,
    pub min_degree: usize,
    pub reason: Option<String>,
}

/// Whether `spot` is an (m, gamma)-dense spot of G: non-empty F,
/// density above gamma and every vertex with more than m F-edges.
pub fn is_dense_spot(g: &Graph, spot: &DenseSpot, m: &Rational, gamma: &Rational) -> Result<SpotCheck> {
    spot.validate_shape(g)?;
    let density = spot.density();
    let min_degree = spot.min_degree(g.n());
    let reason = if &density <= gamma {
        Some(format!("density {density} not above {gamma}"))
    } else if &int(min_degree) <= m {
        Some(format!("minimum degree {min_degree} not above {m}"))
    } else {
        None
    };
    Ok(SpotCheck { is_spot: reason.is_none(), density, min_degree, reason })
}

#[derive(Debug, Clone)]
pub struct SpotSearchOptions {
    /// Exhaustive search when at most this many vertices can take part.
    pub exhaustive_limit: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SpotSearchOptions {
    fn default() -> Self {
        SpotSearchOptions { exhaustive_limit: 16, trials: 64, seed: 0xd5 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpotSearch {
    pub spot: Option<DenseSpot>,
    /// True when the search was exhaustive, so `None` proves absence.
    pub ground_truth: bool,
}

/// Looks for an (m, gamma)-dense spot. F is always the full edge set
/// between the sides, which only raises density and degrees.
pub fn search_dense_spot(g: &Graph, m: &Rational, gamma: &Rational, opts: &SpotSearchOptions) -> SpotSearch {
    let candidates: Vec<usize> = (0..g.n()).filter(|&v| &int(g.degree(v)) > m).collect();
    if candidates.len() <= opts.exhaustive_limit.min(30) {
        return SpotSearch { spot: exhaustive_spot(g, &candidates, m, gamma), ground_truth: true };
    }
    SpotSearch { spot: heuristic_spot(g, m, gamma, opts.trials, opts.seed), ground_truth: false }
}

fn exhaustive_spot(g: &Graph, verts: &[usize], m: &Rational, gamma: &Rational) -> Option<DenseSpot> {
    let len = verts.len();
    let nb: Vec<u32> = verts
        .iter()
        .map(|&v| (0..len).filter(|&j| g.has_edge(v, verts[j])).fold(0u32, |acc, j| acc | 1 << j))
        .collect();
    // Smallest degree strictly above m.
    let need = m.floor().to_integer();
    let need: u32 = if need < 0.into() { 0 } else { need.try_into().unwrap_or(u32::MAX) };
    let need = need + 1;
    for umask in 1u32..(1 << len) {
        if umask.count_ones() < need {
            continue;
        }
        let mut t = 0u32;
        for (j, &nbj) in nb.iter().enumerate() {
            if umask >> j & 1 == 0 && (nbj & umask).count_ones() >= need {
                t |= 1 << j;
            }
        }
        let ulow = umask.trailing_zeros();
        // Only W with a larger smallest element: each unordered spot once.
        let mut sub = t;
        while sub != 0 {
            if sub.trailing_zeros() > ulow && sub.count_ones() >= need {
                let u_ok = (0..len).filter(|&j| umask >> j & 1 == 1).all(|j| (nb[j] & sub).count_ones() >= need);
                let w_ok = (0..len).filter(|&j| sub >> j & 1 == 1).all(|j| (nb[j] & umask).count_ones() >= need);
                if u_ok && w_ok {
                    let edges: u32 =
                        (0..len).filter(|&j| umask >> j & 1 == 1).map(|j| (nb[j] & sub).count_ones()).sum();
                    let dens = Rational::new(
                        (edges as usize).into(),
                        (umask.count_ones() as usize * sub.count_ones() as usize).into(),
                    );
                    if &dens > gamma {
                        let pick = |mask: u32| -> VertexSet {
                            (0..len).filter(|&j| mask >> j & 1 == 1).map(|j| verts[j]).collect()
                        };
                        return Some(DenseSpot::induced(g, pick(umask), pick(sub)));
                    }
                }
            }
            sub = (sub - 1) & t;
        }
    }
    None
}

/// Peels the bipartite graph of `edges` crossing the colouring until
/// every remaining vertex has more than m crossing edges, then returns the
/// first component (densified greedily) whose density exceeds gamma.
pub(crate) fn peel_coloring(
    n: usize,
    edges: &[Edge],
    side: &[bool],
    m: &Rational,
    gamma: &Rational,
) -> Option<DenseSpot> {
    let crossing: Vec<Edge> = edges.iter().copied().filter(|&(a, b)| side[a] != side[b]).collect();
    let h = Graph::from_edges_lossy(n, crossing);
    let mut alive: Vec<bool> = (0..n).map(|v| h.degree(v) > 0).collect();
    let mut deg: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let peel = |alive: &mut Vec<bool>, deg: &mut Vec<usize>| {
        let mut stack: Vec<usize> = (0..n).filter(|&v| alive[v] && &int(deg[v]) <= m).collect();
        while let Some(v) = stack.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &u in h.neighbors(v) {
                if alive[u] {
                    deg[u] -= 1;
                    if &int(deg[u]) <= m {
                        stack.push(u);
                    }
                }
            }
        }
    };
    peel(&mut alive, &mut deg);
    let core: VertexSet = (0..n).filter(|&v| alive[v]).collect();
    for comp in h.components_within(&core) {
        let mut comp_alive: Vec<bool> = (0..n).map(|v| comp.contains(v)).collect();
        let mut comp_deg: Vec<usize> =
            (0..n).map(|v| if comp_alive[v] { h.deg_into(v, &comp_alive) } else { 0 }).collect();
        loop {
            let members: VertexSet = (0..n).filter(|&v| comp_alive[v]).collect();
            if members.is_empty() {
                break;
            }
            let u: VertexSet = members.iter().copied().filter(|&v| !side[v]).collect();
            let w: VertexSet = members.iter().copied().filter(|&v| side[v]).collect();
            if u.is_empty() || w.is_empty() {
                break;
            }
            let spot = DenseSpot::induced(&h, u, w);
            if &spot.density() > gamma {
                return Some(spot);
            }
            // Drop the vertex of smallest degree and re-peel.
            let worst = members.iter().copied().min_by_key(|&v| (comp_deg[v], v))?;
            comp_alive[worst] = false;
            for &x in h.neighbors(worst) {
                if comp_alive[x] {
                    comp_deg[x] -= 1;
                }
            }
            let mut stack: Vec<usize> = (0..n).filter(|&v| comp_alive[v] && &int(comp_deg[v]) <= m).collect();
            while let Some(v) = stack.pop() {
                if !comp_alive[v] {
                    continue;
                }
                comp_alive[v] = false;
                for &x in h.neighbors(v) {
                    if comp_alive[x] {
                        comp_deg[x] -= 1;
                        if &int(comp_deg[x]) <= m {
                            stack.push(x);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Two-colouring of each bipartite component (others left uncoloured).
fn bipartite_coloring(g: &Graph) -> Option<Vec<bool>> {
    let mut color: Vec<Option<bool>> = vec![None; g.n()];
    let mut any = false;
    for comp in g.components() {
        let start = comp.first()?;
        let mut local = vec![(start, false)];
        let mut ok = true;
        let mut assigned = vec![];
        color[start] = Some(false);
        while let Some((v, c)) = local.pop() {
            assigned.push(v);
            for &u in g.neighbors(v) {
                match color[u] {
                    None => {
                        color[u] = Some(!c);
                        local.push((u, !c));
                    }
                    Some(cu) if cu == c => ok = false,
                    _ => {}
                }
            }
        }
        if ok && comp.len() > 1 {
            any = true;
        } else {
            for v in assigned {
                color[v] = None;
            }
        }
    }
    any.then(|| color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

/// Local max-cut improvement: flip vertices with more neighbours on
/// their own side.
fn improve_cut(g: &Graph, side: &mut [bool]) {
    loop {
        let mut changed = false;
        for v in 0..g.n() {
            let same = g.neighbors(v).iter().filter(|&&u| side[u] == side[v]).count();
            if 2 * same > g.degree(v) {
                side[v] = !side[v];
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

fn heuristic_spot(g: &Graph, m: &Rational, gamma: &Rational, trials: usize, seed: u64) -> Option<DenseSpot> {
    if let Some(side) = bipartite_coloring(g) {
        if let Some(s) = peel_coloring(g.n(), g.edges(), &side, m, gamma) {
            return Some(s);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut side: Vec<bool> = (0..g.n()).map(|_| rng.gen()).collect();
        improve_cut(g, &mut side);
        if let Some(s) = peel_coloring(g.n(), g.edges(), &side, m, gamma) {
            return Some(s);
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverResult {
    pub spots: Vec<DenseSpot>,
    pub uncovered: Vec<Edge>,
}

/// Peels edge-disjoint dense spots off G until none is found; the
/// remaining edges are reported as uncovered.
pub fn greedy_dense_cover(g: &Graph, m: &Rational, gamma: &Rational, seed: u64) -> CoverResult {
    let mut remaining = g.clone();
    let mut spots = Vec::new();
    let opts = SpotSearchOptions { seed, ..SpotSearchOptions::default() };
    loop {
        let found = if remaining.m() == 0 {
            None
        } else {
            heuristic_spot(&remaining, m, gamma, opts.trials, opts.seed.wrapping_add(spots.len() as u64))
                .or_else(|| search_dense_spot(&remaining, m, gamma, &opts).spot)
        };
        let Some(spot) = found else { break };
        let used: std::collections::HashSet<Edge> = spot.f.iter().copied().collect();
        let rest: Vec<Edge> = remaining.edges().iter().copied().filter(|e| !used.contains(e)).collect();
        remaining = Graph::from_edges_lossy(g.n(), rest);
        spots.push(spot);
    }
    CoverResult { spots, uncovered: remaining.edges().to_vec() }
}

/// Whether `spots` are pairwise edge-disjoint.
pub fn edge_disjoint(spots: &[DenseSpot]) -> bool {
    let mut seen = std::collections::HashSet::new();
    spots.iter().flat_map(|s| s.f.iter()).all(|e| seen.insert(*e))
}

/// Union of the spot edge sets as a graph on `n` vertices.
pub fn union_graph(n: usize, spots: &[DenseSpot]) -> Graph {
    Graph::from_edges_lossy(n, spots.iter().flat_map(|s| s.f.iter().copied()))
}
