//! Alternating and augmenting paths for regularized matchings, and the
//! dichotomy between an augmenting path and a sparse separation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::matching::RegularizedMatching;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Serialize)]
pub struct PathLevel {
    /// Indices into the matching of the pairs whose first set is used.
    pub pairs: Vec<usize>,
    #[serde(rename = "Y")]
    pub y: VertexSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlternatingPath {
    #[serde(rename = "Y0")]
    pub y0: VertexSet,
    pub levels: Vec<PathLevel>,
    /// Target ensemble; present exactly for augmenting paths.
    #[serde(rename = "C")]
    pub target: Option<Vec<VertexSet>>,
    #[serde(with = "crate::rational::serde_rational")]
    pub delta: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub s: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub t: Rational,
}

impl AlternatingPath {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Y_i for i = 0..=h.
    pub fn y(&self, i: usize) -> &VertexSet {
        if i == 0 {
            &self.y0
        } else {
            &self.levels[i - 1].y
        }
    }

    pub fn last_y(&self) -> &VertexSet {
        self.y(self.levels.len())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    pub levels_disjoint: bool,
    pub y0_outside_matching: bool,
    pub y_sets_exact: bool,
    pub y_sizes: bool,
    pub level_degrees: bool,
    /// None for alternating paths.
    pub target_ok: Option<bool>,
    pub ok: bool,
    pub failure: Option<String>,
}

/// Re-checks every clause of an alternating (or augmenting) path from
/// raw edge counts.
pub fn validate_path(g: &Graph, matching: &RegularizedMatching, path: &AlternatingPath) -> PathReport {
    let n = int(g.n());
    let mut failure: Option<String> = None;
    let mut note = |ok: bool, msg: String| {
        if !ok && failure.is_none() {
            failure = Some(msg);
        }
        ok
    };
    let mut seen = vec![false; matching.len()];
    let mut levels_disjoint = true;
    for level in &path.levels {
        for &i in &level.pairs {
            if i >= matching.len() || seen[i] {
                levels_disjoint = false;
            } else {
                seen[i] = true;
            }
        }
    }
    let levels_disjoint = note(levels_disjoint, "a matching pair is repeated or out of range".into());
    let vm = matching.vertex_set();
    let y0_outside_matching = note(path.y0.is_disjoint(&vm), "Y0 meets V(M)".into());
    let mut y_sets_exact = true;
    let mut y_sizes = true;
    let mut level_degrees = true;
    for (i, level) in path.levels.iter().enumerate() {
        let prev = path.y(i);
        let expected = VertexSet::union_all(level.pairs.iter().filter_map(|&j| matching.pairs.get(j)).map(|p| &p.b));
        if expected != level.y {
            y_sets_exact = note(false, format!("Y_{} is not the union of its partners", i + 1));
        }
        if int(prev.len()) < &path.delta * &n {
            y_sizes = note(false, format!("|Y_{i}| = {} below delta n", prev.len()));
        }
        for &j in &level.pairs {
            if let Some(p) = matching.pairs.get(j) {
                if int(g.e_between(&p.a, prev)) < &path.s * int(p.a.len()) {
                    level_degrees = note(false, format!("pair {j} sends too few edges to Y_{i}"));
                }
            }
        }
    }
    let target_ok = path.target.as_ref().map(|c| {
        let forbidden = path.y0.union(&vm);
        let mut disjoint = true;
        for (i, a) in c.iter().enumerate() {
            disjoint &= a.is_disjoint(&forbidden) && c[i + 1..].iter().all(|b| a.is_disjoint(b));
        }
        let mass = g.e_between(&VertexSet::union_all(c), path.last_y());
        let ok = disjoint && int(mass) >= &path.t * &n;
        note(ok, "target ensemble is not disjoint from Y0 and V(M) or sends too few edges".into())
    });
    let ok =
        levels_disjoint && y0_outside_matching && y_sets_exact && y_sizes && level_degrees && target_ok.unwrap_or(true);
    PathReport { levels_disjoint, y0_outside_matching, y_sets_exact, y_sizes, level_degrees, target_ok, ok, failure }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "tag")]
pub enum SeparationOrPath {
    /// Sub-matching (by pair indices) with a sparse separation.
    M1 {
        pairs: Vec<usize>,
        /// e(⋃C ∪ V1(M - M''), Y0 ∪ V2(M'')).
        crossing_edges: usize,
        #[serde(with = "crate::rational::serde_rational")]
        bound: Rational,
        /// The maximal alternating path the separation was read off.
        path: Option<AlternatingPath>,
    },
    M2 {
        path: AlternatingPath,
    },
}

fn separated(
    pairs: Vec<usize>,
    crossing_edges: usize,
    bound: Rational,
    path: Option<AlternatingPath>,
) -> Result<SeparationOrPath> {
    if int(crossing_edges) >= bound {
        return Err(Error::Invariant(format!("separation carries {crossing_edges} edges, not below {bound}")));
    }
    Ok(SeparationOrPath::M1 { pairs, crossing_edges, bound, path })
}

/// Thresholds (delta, s, t) = (tau / 2Omega, tau^2 k / 8Omega, tau^2 k / 16Omega).
pub fn path_thresholds(tau: &Rational, omega: &Rational, k: usize) -> (Rational, Rational, Rational) {
    let k = int(k);
    let sq = tau * tau;
    (tau / (int(2) * omega), &sq * &k / (int(8) * omega), &sq * &k / (int(16) * omega))
}

/// e(⋃C ∪ V1(M - M''), Y0 ∪ V2(M'')) for the sub-matching given by `chosen`.
pub fn separation_mass(
    g: &Graph,
    matching: &RegularizedMatching,
    chosen: &[usize],
    y0: &VertexSet,
    target: &[VertexSet],
) -> usize {
    let mut left = VertexSet::union_all(target);
    let mut right = y0.clone();
    for (i, p) in matching.pairs.iter().enumerate() {
        if chosen.contains(&i) {
            right = right.union(&p.b);
        } else {
            left = left.union(&p.a);
        }
    }
    g.e_between(&left, &right)
}

/// Either a sparse separation M'' ⊆ M or an augmenting path of length at
/// most 2 Omega / tau from Y0 to C. Levels take every unused pair whose
/// first set sends at least s |A| edges to the previous level; the path
/// is cut at the first level carrying more than tau^2 k n / (16 Omega)
/// edges from ⋃C.
pub fn find_augmenting_or_separate(
    g: &Graph,
    tau: &Rational,
    omega: &Rational,
    k: usize,
    matching: &RegularizedMatching,
    y0: &VertexSet,
    target: &[VertexSet],
) -> Result<SeparationOrPath> {
    if tau <= &int(0) || tau >= &int(1) {
        return Err(Error::Domain(format!("tau must lie in (0, 1), got {tau}")));
    }
    if omega <= &int(0) {
        return Err(Error::Domain(format!("Omega must be positive, got {omega}")));
    }
    if int(g.max_degree()) > omega * int(k) {
        return Err(Error::Precondition(format!("maximum degree {} above Omega k", g.max_degree())));
    }
    let vm = matching.vertex_set();
    if !y0.is_disjoint(&vm) {
        return Err(Error::Precondition("Y0 meets V(M)".into()));
    }
    let forbidden = vm.union(y0);
    for (i, c) in target.iter().enumerate() {
        if !c.is_disjoint(&forbidden) || target[i + 1..].iter().any(|d| !c.is_disjoint(d)) {
            return Err(Error::Precondition(format!("target set {i} meets V(M), Y0 or another target set")));
        }
    }
    let n = g.n();
    let nk = int(n) * int(k);
    let bound = tau * &nk;
    let (delta, s, t) = path_thresholds(tau, omega, k);
    let delta_n = &delta * int(n);
    if int(y0.len()) <= delta_n {
        let crossing_edges = separation_mass(g, matching, &[], y0, target);
        return separated(Vec::new(), crossing_edges, bound, None);
    }
    let mut used = vec![false; matching.len()];
    let mut path =
        AlternatingPath { y0: y0.clone(), levels: Vec::new(), target: None, delta, s: s.clone(), t: t.clone() };
    while int(path.last_y().len()) >= delta_n {
        let prev = path.last_y().clone();
        let pairs: Vec<usize> = (0..matching.len())
            .filter(|&i| !used[i])
            .filter(|&i| {
                let a = &matching.pairs[i].a;
                int(g.e_between(a, &prev)) >= &s * int(a.len())
            })
            .collect();
        if pairs.is_empty() {
            break;
        }
        for &i in &pairs {
            used[i] = true;
        }
        let y = VertexSet::union_all(pairs.iter().map(|&i| &matching.pairs[i].b));
        path.levels.push(PathLevel { pairs, y });
    }
    let h = path.len();
    let ell_star = if int(path.last_y().len()) >= delta_n { h } else { h - 1 };
    let c_union = VertexSet::union_all(target);
    let masses: Vec<usize> = (0..=ell_star).map(|i| g.e_between(&c_union, path.y(i))).collect();
    let total: usize = masses.iter().sum();
    if int(total) <= tau * &nk / int(4) {
        let chosen: Vec<usize> = path.levels.iter().flat_map(|l| l.pairs.iter().copied()).collect();
        let crossing_edges = separation_mass(g, matching, &chosen, y0, target);
        return separated(chosen, crossing_edges, bound, Some(path));
    }
    let tn = &t * int(n);
    let j = masses
        .iter()
        .position(|&m| int(m) > tn)
        .ok_or_else(|| Error::Invariant("no level carries the averaged edge mass".into()))?;
    path.levels.truncate(j);
    path.target = Some(target.to_vec());
    Ok(SeparationOrPath::M2 { path })
}
