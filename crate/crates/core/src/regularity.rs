//! Pair densities, epsilon-regularity certification and the regularity
//! partitioner.
//!
//! Certification is exact whenever the smaller side has at most
//! `size_cap` vertices: the smaller side is enumerated, and for a fixed
//! subset on that side the extreme subsets of each size on the other side
//! are the vertices with the fewest or most neighbours into it.

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::{as_i128_pair, ceil_usize, int, pow, Rational};

pub const DEFAULT_SIZE_CAP: usize = 14;

/// d(U, W) = e(U, W) / (|U| |W|).
pub fn density(g: &Graph, u: &VertexSet, w: &VertexSet) -> Result<Rational> {
    if u.is_empty() || w.is_empty() {
        return Err(Error::Input("density of a pair with an empty side".into()));
    }
    Ok(Rational::new(g.e_between(u, w).into(), (u.len() * w.len()).into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertMode {
    Exhaustive,
    Heuristic,
}

#[derive(Debug, Clone, Serialize)]
pub struct IrregularityWitness {
    pub u_sub: VertexSet,
    pub w_sub: VertexSet,
    #[serde(with = "crate::rational::serde_rational")]
    pub density: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub deviation: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    #[serde(with = "crate::rational::serde_rational")]
    pub density: Rational,
    pub witness: Option<IrregularityWitness>,
    pub mode: CertMode,
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Exhaustive search runs when the smaller side has at most this many vertices.
    pub size_cap: usize,
    /// Random restarts in heuristic mode.
    pub trials: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { size_cap: DEFAULT_SIZE_CAP, trials: 400, seed: 0x5eed }
    }
}

/// Subset search state shared by both modes. `small` is enumerated and
/// `other` is optimised per subset.
struct PairSearch<'a> {
    small: &'a [usize],
    other: &'a [usize],
    /// For each vertex of `other`, bitmask of its neighbours among `small`.
    nbr_masks: Vec<u64>,
    total_edges: i128,
    eps: (i128, i128),
    min_small: usize,
    min_other: usize,
    best: Option<Candidate>,
}

#[derive(Clone, Copy)]
struct Candidate {
    mask: u64,
    size_other: usize,
    edges: i128,
    high: bool,
    /// Deviation numerator |e' N - e a s|; denominator a s N.
    dev_num: i128,
    dev_den: i128,
}

impl<'a> PairSearch<'a> {
    fn new(g: &Graph, small: &'a [usize], other: &'a [usize], eps: (i128, i128)) -> Self {
        let index: std::collections::HashMap<usize, usize> = small.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let nbr_masks = other
            .iter()
            .map(|&o| g.neighbors(o).iter().filter_map(|u| index.get(u)).fold(0u64, |m, &i| m | 1 << i))
            .collect::<Vec<_>>();
        let total_edges = nbr_masks.iter().map(|m| m.count_ones() as i128).sum();
        let min_of = |len: usize| {
            let need = Rational::new(eps.0.into(), eps.1.into()) * int(len);
            ceil_usize(&need).max(1)
        };
        PairSearch {
            small,
            other,
            nbr_masks,
            total_edges,
            eps,
            min_small: min_of(small.len()),
            min_other: min_of(other.len()),
            best: None,
        }
    }

    fn big_n(&self) -> i128 {
        (self.small.len() * self.other.len()) as i128
    }

    /// Examines every size on the `other` side for the subset `mask`.
    fn scan(&mut self, mask: u64) {
        let a = mask.count_ones() as usize;
        if a < self.min_small {
            return;
        }
        let mut hist = vec![0usize; a + 1];
        for m in &self.nbr_masks {
            hist[(m & mask).count_ones() as usize] += 1;
        }
        let total: i128 = hist.iter().enumerate().map(|(c, &h)| (c * h) as i128).sum();
        let olen = self.other.len();
        // Walk the histogram from both ends, one vertex at a time.
        let (mut low_sum, mut high_sum) = (0i128, 0i128);
        let (mut lo_c, mut lo_left) = (0usize, hist[0]);
        let (mut hi_c, mut hi_left) = (a, hist[a]);
        for s in 1..=olen {
            while lo_left == 0 {
                lo_c += 1;
                lo_left = hist[lo_c];
            }
            low_sum += lo_c as i128;
            lo_left -= 1;
            while hi_left == 0 {
                hi_c -= 1;
                hi_left = hist[hi_c];
            }
            high_sum += hi_c as i128;
            hi_left -= 1;
            if s < self.min_other {
                continue;
            }
            self.consider(mask, a, s, low_sum, false);
            self.consider(mask, a, s, high_sum, true);
        }
        debug_assert_eq!(low_sum, total);
    }

    fn consider(&mut self, mask: u64, a: usize, s: usize, edges: i128, high: bool) {
        let n = self.big_n();
        let dev_num = (edges * n - self.total_edges * (a * s) as i128).abs();
        let dev_den = (a * s) as i128 * n;
        let better = match &self.best {
            None => true,
            Some(b) => dev_num * b.dev_den > b.dev_num * dev_den,
        };
        if better {
            self.best = Some(Candidate { mask, size_other: s, edges, high, dev_num, dev_den });
        }
    }

    fn irregular(&self) -> bool {
        self.best.as_ref().is_some_and(|b| self.eps.1 * b.dev_num >= self.eps.0 * b.dev_den)
    }

    fn witness(&self, small_is_u: bool) -> Option<IrregularityWitness> {
        let b = self.best?;
        let small_sub: VertexSet =
            (0..self.small.len()).filter(|i| b.mask >> i & 1 == 1).map(|i| self.small[i]).collect();
        let mut order: Vec<(u32, usize)> =
            self.nbr_masks.iter().zip(self.other).map(|(m, &o)| ((m & b.mask).count_ones(), o)).collect();
        if b.high {
            order.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        } else {
            order.sort();
        }
        let other_sub: VertexSet = order.iter().take(b.size_other).map(|&(_, o)| o).collect();
        let dens = Rational::new(b.edges.into(), (small_sub.len() * other_sub.len()).into());
        let deviation = Rational::new(b.dev_num.into(), b.dev_den.into());
        let (u_sub, w_sub) = if small_is_u { (small_sub, other_sub) } else { (other_sub, small_sub) };
        Some(IrregularityWitness { u_sub, w_sub, density: dens, deviation })
    }
}

fn validate_pair(u: &VertexSet, w: &VertexSet, eps: &Rational) -> Result<(i128, i128)> {
    if u.is_empty() || w.is_empty() {
        return Err(Error::Input("regularity of a pair with an empty side".into()));
    }
    if !u.is_disjoint(w) {
        return Err(Error::Input("regularity pair sides must be disjoint".into()));
    }
    if eps <= &Rational::zero() {
        return Err(Error::Domain(format!("epsilon must be positive, got {eps}")));
    }
    as_i128_pair(eps).ok_or_else(|| Error::Domain(format!("epsilon {eps} has too many digits")))
}

/// Decides whether (U, W) is eps-regular: no U' ⊆ U, W' ⊆ W with
/// |U'| ≥ eps|U|, |W'| ≥ eps|W| and |d(U', W') - d(U, W)| ≥ eps. The
/// witness, when present, has the largest deviation found.
pub fn certify_regular(
    g: &Graph,
    u: &VertexSet,
    w: &VertexSet,
    eps: &Rational,
    opts: &CertifyOptions,
) -> Result<RegularityVerdict> {
    let eps_pair = validate_pair(u, w, eps)?;
    let small_is_u = u.len() <= w.len();
    let (small, other) = if small_is_u { (u, w) } else { (w, u) };
    let dens = density(g, u, w)?;
    let exhaustive = small.len() <= opts.size_cap.min(63);
    if !exhaustive {
        return heuristic(g, small, other, small_is_u, eps_pair, dens, opts);
    }
    let mut search = PairSearch::new(g, small.as_slice(), other.as_slice(), eps_pair);
    let full = (1u64 << small.len()) - 1;
    for mask in 1..=full {
        search.scan(mask);
    }
    let regular = !search.irregular();
    Ok(RegularityVerdict {
        regular,
        density: dens,
        witness: if regular { None } else { search.witness(small_is_u) },
        mode: CertMode::Exhaustive,
    })
}

/// Greedy and randomised search over subsets of the smaller side, each
/// paired with its exact best partner on the other side.
fn heuristic(
    g: &Graph,
    small: &VertexSet,
    other: &VertexSet,
    small_is_u: bool,
    eps: (i128, i128),
    dens: Rational,
    opts: &CertifyOptions,
) -> Result<RegularityVerdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let other_mask = other.mask(g.n());
    let mut best: Option<(Rational, IrregularityWitness)> = None;
    let slen = small.len();
    let min_small = ceil_usize(&(Rational::new(eps.0.into(), eps.1.into()) * int(slen))).max(1);
    let mut by_degree: Vec<usize> = small.as_slice().to_vec();
    by_degree.sort_by_key(|&v| (g.deg_into(v, &other_mask), v));
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for a in min_small..=slen {
        candidates.push(by_degree[..a].to_vec());
        candidates.push(by_degree[slen - a..].to_vec());
    }
    for _ in 0..opts.trials {
        let a = rng.gen_range(min_small..=slen);
        let mut pool = small.as_slice().to_vec();
        pool.shuffle(&mut rng);
        candidates.push(pool[..a].to_vec());
    }
    for cand in candidates {
        let mut current: VertexSet = cand.into_iter().collect();
        let mut current_dev = evaluate(g, small, &current, other, eps);
        // Single-vertex flips while the deviation increases.
        loop {
            let mut improved = false;
            for &v in small {
                let mut next = current.clone();
                if next.contains(v) {
                    if next.len() <= min_small {
                        continue;
                    }
                    next = next.difference(&VertexSet::from(vec![v]));
                } else {
                    next.insert(v);
                }
                let dev = evaluate(g, small, &next, other, eps);
                if dev.0 > current_dev.0 {
                    current = next;
                    current_dev = dev;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|(d, _)| current_dev.0 > *d) {
            if let Some(w) = current_dev.1 {
                best = Some((current_dev.0, w));
            }
        }
    }
    let eps_r = Rational::new(eps.0.into(), eps.1.into());
    let irregular = best.as_ref().is_some_and(|(d, _)| *d >= eps_r);
    let witness = best.filter(|_| irregular).map(|(_, mut w)| {
        if !small_is_u {
            std::mem::swap(&mut w.u_sub, &mut w.w_sub);
        }
        w
    });
    Ok(RegularityVerdict { regular: !irregular, density: dens, witness, mode: CertMode::Heuristic })
}

/// Best deviation for a fixed subset of the small side (witness oriented
/// small-side first).
fn evaluate(
    g: &Graph,
    small: &VertexSet,
    sub: &VertexSet,
    other: &VertexSet,
    eps: (i128, i128),
) -> (Rational, Option<IrregularityWitness>) {
    if sub.is_empty() {
        return (Rational::zero(), None);
    }
    let sub_mask = sub.mask(g.n());
    let mut counts: Vec<(usize, usize)> = other.iter().map(|&o| (g.deg_into(o, &sub_mask), o)).collect();
    counts.sort();
    let total = g.e_between(small, other);
    let big_n = small.len() * other.len();
    let min_other = ceil_usize(&(Rational::new(eps.0.into(), eps.1.into()) * int(other.len()))).max(1);
    let a = sub.len();
    let mut best: (Rational, Option<IrregularityWitness>) = (Rational::zero(), None);
    let prefix: Vec<usize> = std::iter::once(0)
        .chain(counts.iter().scan(0, |acc, &(c, _)| {
            *acc += c;
            Some(*acc)
        }))
        .collect();
    let sum_all = prefix[counts.len()];
    for s in min_other..=counts.len() {
        for high in [false, true] {
            let edges = if high { sum_all - prefix[counts.len() - s] } else { prefix[s] };
            let dev = Rational::new(
                ((edges * big_n) as i128 - (total * a * s) as i128).abs().into(),
                ((a * s * big_n) as i128).into(),
            );
            if dev > best.0 {
                let members: VertexSet = if high {
                    counts[counts.len() - s..].iter().map(|&(_, o)| o).collect()
                } else {
                    counts[..s].iter().map(|&(_, o)| o).collect()
                };
                let witness = IrregularityWitness {
                    u_sub: sub.clone(),
                    w_sub: members,
                    density: Rational::new(edges.into(), (a * s).into()),
                    deviation: dev.clone(),
                };
                best = (dev, Some(witness));
            }
        }
    }
    best
}

/// Subpairs of an eps-regular pair of density d on at least an alpha
/// fraction of each side are (2 eps / alpha)-regular with density at
/// least d - eps. Returns (2 eps / alpha, d - eps).
pub fn subpair_bound(eps: &Rational, alpha: &Rational, d: &Rational) -> Result<(Rational, Rational)> {
    if eps <= &Rational::zero() || alpha > &int(1) || alpha <= eps {
        return Err(Error::Domain(format!("need 0 < eps < alpha <= 1, got eps={eps}, alpha={alpha}")));
    }
    Ok((int(2) * eps / alpha, d - eps))
}

/// Output of the regularity partitioner: an exceptional set and parts of
/// equal size.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityPartition {
    pub exceptional: VertexSet,
    pub parts: Vec<VertexSet>,
    pub iterations: usize,
    /// Ordered pairs (i, j), i != j, that are not eps-regular.
    pub irregular_ordered_pairs: usize,
}

fn normalise_prepartition(g: &Graph, prepartition: &[VertexSet]) -> Result<Vec<VertexSet>> {
    if prepartition.is_empty() {
        return Ok(vec![g.vertices()]);
    }
    let mut seen = vec![false; g.n()];
    for class in prepartition {
        for &v in class {
            if v >= g.n() {
                return Err(Error::Input(format!("prepartition vertex {v} out of range")));
            }
            if seen[v] {
                return Err(Error::Input(format!("prepartition classes overlap at {v}")));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::Input(format!("prepartition misses vertex {v}")));
    }
    Ok(prepartition.iter().filter(|c| !c.is_empty()).cloned().collect())
}

/// Counts unordered irregular pairs among `parts`.
fn irregular_pairs(g: &Graph, parts: &[VertexSet], eps: &Rational) -> Result<Vec<(usize, usize, RegularityVerdict)>> {
    let opts = CertifyOptions::default();
    let mut out = Vec::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let v = certify_regular(g, &parts[i], &parts[j], eps, &opts)?;
            if !v.regular {
                out.push((i, j, v));
            }
        }
    }
    Ok(out)
}

/// Chunks each class in `order` into parts of `size`; tails go to the
/// exceptional set.
fn chunk(classes: &[Vec<usize>], size: usize) -> (VertexSet, Vec<VertexSet>) {
    let mut exceptional = Vec::new();
    let mut parts = Vec::new();
    for class in classes {
        let full = class.len() / size * size;
        for piece in class[..full].chunks(size) {
            parts.push(piece.iter().copied().collect());
        }
        exceptional.extend_from_slice(&class[full..]);
    }
    (VertexSet::from(exceptional), parts)
}

fn size_admissible(classes: &[Vec<usize>], size: usize, ell_min: usize, eps: &Rational, n: usize) -> bool {
    let p: usize = classes.iter().map(|c| c.len() / size).sum();
    let rem: usize = classes.iter().map(|c| c.len() % size).sum();
    p > ell_min && int(rem) < eps * int(n)
}

/// Regularity partition refining `prepartition` (at most `ell_min`
/// classes; empty means one class): more than `ell_min` equal parts, an
/// exceptional set below eps n, and at most eps p^2 irregular ordered
/// pairs. Parts shrink by splitting along irregularity witnesses; ties go
/// to the lowest vertex id.
pub fn szemeredi_partition(
    g: &Graph,
    eps: &Rational,
    ell_min: usize,
    prepartition: &[VertexSet],
) -> Result<RegularityPartition> {
    if eps <= &Rational::zero() || eps >= &int(1) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if ell_min == 0 {
        return Err(Error::Domain("ell_min must be positive".into()));
    }
    let classes = normalise_prepartition(g, prepartition)?;
    if classes.len() > ell_min {
        return Err(Error::Precondition(format!(
            "prepartition has {} classes, more than ell_min = {ell_min}",
            classes.len()
        )));
    }
    let n = g.n();
    let mut order: Vec<Vec<usize>> = classes.iter().map(|c| c.as_slice().to_vec()).collect();
    let cap = DEFAULT_SIZE_CAP.min(n.max(1));
    let mut size = (1..=cap)
        .rev()
        .find(|&s| size_admissible(&order, s, ell_min, eps, n))
        .ok_or_else(|| Error::Domain(format!("n = {n} too small for more than {ell_min} parts")))?;
    let iteration_cap = ceil_usize(&(int(1) / pow(eps, 5))).max(1);
    let mut best: Option<RegularityPartition> = None;
    for iteration in 1..=iteration_cap {
        let (exceptional, parts) = chunk(&order, size);
        let bad = irregular_pairs(g, &parts, eps)?;
        let p = parts.len();
        let candidate =
            RegularityPartition { exceptional, parts, iterations: iteration, irregular_ordered_pairs: 2 * bad.len() };
        if int(2 * bad.len()) <= eps * int(p * p) {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|b| b.irregular_ordered_pairs > candidate.irregular_ordered_pairs) {
            best = Some(candidate.clone());
        }
        if size == 1 {
            break;
        }
        // Vertices are regrouped by (part, witness signature) so that the
        // atoms cut out by the witnesses stay contiguous.
        let mut signature = vec![(usize::MAX, Vec::<bool>::new()); n];
        for (pi, part) in candidate.parts.iter().enumerate() {
            for &v in part {
                signature[v].0 = pi;
            }
        }
        for (i, j, verdict) in &bad {
            if let Some(w) = &verdict.witness {
                for &v in &candidate.parts[*i] {
                    signature[v].1.push(w.u_sub.contains(v));
                }
                for &v in &candidate.parts[*j] {
                    signature[v].1.push(w.w_sub.contains(v));
                }
            }
        }
        for class in &mut order {
            class.sort_by(|&a, &b| signature[a].cmp(&signature[b]).then(a.cmp(&b)));
        }
        let mut next = (size / 2).max(1);
        while next > 1 && !size_admissible(&order, next, ell_min, eps, n) {
            next -= 1;
        }
        size = next;
    }
    let best = best.map(|b| {
        format!(
            "{} parts, {} irregular ordered pairs after {} iterations",
            b.parts.len(),
            b.irregular_ordered_pairs,
            b.iterations
        )
    });
    Err(Error::NotConverged(best.unwrap_or_default()))
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub covers_vertices: bool,
    pub equal_part_sizes: bool,
    pub exceptional_small: bool,
    pub refines_prepartition: bool,
    pub enough_parts: bool,
    pub irregular_ordered_pairs: usize,
    pub irregular_within_budget: bool,
    /// All regularity verdicts were exhaustive.
    pub exact: bool,
    pub ok: bool,
}

/// Independent check of every postcondition of [`szemeredi_partition`].
pub fn verify_partition(
    g: &Graph,
    partition: &RegularityPartition,
    eps: &Rational,
    ell_min: usize,
    prepartition: &[VertexSet],
) -> Result<PartitionReport> {
    let classes = normalise_prepartition(g, prepartition)?;
    let n = g.n();
    let mut count = vec![0usize; n];
    for &v in partition.exceptional.iter().chain(partition.parts.iter().flatten()) {
        if v >= n {
            return Err(Error::Input(format!("partition vertex {v} out of range")));
        }
        count[v] += 1;
    }
    let covers_vertices = count.iter().all(|&c| c == 1);
    let equal_part_sizes =
        partition.parts.windows(2).all(|w| w[0].len() == w[1].len()) && partition.parts.iter().all(|p| !p.is_empty());
    let exceptional_small = int(partition.exceptional.len()) < eps * int(n);
    let refines_prepartition = partition.parts.iter().all(|p| classes.iter().any(|c| p.is_subset(c)));
    let p = partition.parts.len();
    let enough_parts = p > ell_min;
    let opts = CertifyOptions::default();
    let mut irregular = 0;
    let mut exact = true;
    for i in 0..p {
        for j in i + 1..p {
            let v = certify_regular(g, &partition.parts[i], &partition.parts[j], eps, &opts)?;
            exact &= v.mode == CertMode::Exhaustive;
            if !v.regular {
                irregular += 2;
            }
        }
    }
    let irregular_within_budget = int(irregular) <= eps * int(p * p);
    let ok = covers_vertices
        && equal_part_sizes
        && exceptional_small
        && refines_prepartition
        && enough_parts
        && irregular_within_budget;
    Ok(PartitionReport {
        covers_vertices,
        equal_part_sizes,
        exceptional_small,
        refines_prepartition,
        enough_parts,
        irregular_ordered_pairs: irregular,
        irregular_within_budget,
        exact,
        ok,
    })
}

/// Floating view of a verdict's deviation, for reports.
pub fn deviation_f64(v: &RegularityVerdict) -> f64 {
    v.witness.as_ref().and_then(|w| w.deviation.to_f64()).unwrap_or(0.0)
}
