//! Falsification search for avoiding sets: E is (Lambda, eps, gamma, k)-
//! avoiding when every U with |U| <= Lambda k leaves all but at most
//! eps k vertices of E inside some spot meeting U in at most gamma^2 k
//! vertices.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::VertexSet;
use crate::rational::{floor_usize, int, Rational};

use super::spot::DenseSpot;

#[derive(Debug, Clone)]
pub struct AvoidingOptions {
    /// Exhaustive when the number of candidate sets is at most this.
    pub budget: u128,
    pub trials: usize,
    pub seed: u64,
}

impl Default for AvoidingOptions {
    fn default() -> Self {
        AvoidingOptions { budget: 200_000, trials: 200, seed: 0xa701d }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AvoidingVerdict {
    /// Every admissible U was checked.
    Verified,
    Falsified {
        witness: VertexSet,
        bad: VertexSet,
    },
    NotFalsified {
        trials: usize,
    },
}

impl AvoidingVerdict {
    pub fn falsified(&self) -> bool {
        matches!(self, AvoidingVerdict::Falsified { .. })
    }
}

struct Context<'a> {
    spot_vertices: Vec<VertexSet>,
    e_set: &'a VertexSet,
    /// Largest admissible |U ∩ V(D)|, i.e. floor(gamma^2 k).
    allowed: usize,
    tolerance: Rational,
}

impl Context<'_> {
    /// Vertices of E with no spot containing them that U touches lightly.
    fn bad(&self, u: &VertexSet) -> VertexSet {
        let heavy: Vec<bool> = self.spot_vertices.iter().map(|vs| vs.intersection(u).len() > self.allowed).collect();
        self.e_set
            .iter()
            .copied()
            .filter(|&v| !self.spot_vertices.iter().zip(&heavy).any(|(vs, &h)| !h && vs.contains(v)))
            .collect()
    }

    fn exceeds(&self, bad: &VertexSet) -> bool {
        int(bad.len()) > self.tolerance
    }
}

fn binomial(n: usize, r: usize) -> u128 {
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Searches for a set U refuting the avoiding property.
#[allow(clippy::too_many_arguments)]
pub fn check_avoiding(
    spots: &[DenseSpot],
    e_set: &VertexSet,
    lambda: &Rational,
    eps: &Rational,
    gamma: &Rational,
    k: usize,
    opts: &AvoidingOptions,
) -> AvoidingVerdict {
    let ctx = Context {
        spot_vertices: spots.iter().map(DenseSpot::vertices).collect(),
        e_set,
        allowed: floor_usize(&(gamma * gamma * int(k))),
        tolerance: eps * int(k),
    };
    // Larger U only enlarges the bad set, and vertices outside every spot
    // never matter, so it suffices to try maximal U inside the spots.
    let pool: Vec<usize> = VertexSet::union_all(&ctx.spot_vertices).iter().copied().collect();
    let size = floor_usize(&(lambda * int(k))).min(pool.len());
    let empty_bad = ctx.bad(&VertexSet::new());
    if ctx.exceeds(&empty_bad) {
        return AvoidingVerdict::Falsified { witness: VertexSet::new(), bad: empty_bad };
    }
    if binomial(pool.len(), size) <= opts.budget {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let u: VertexSet = idx.iter().map(|&i| pool[i]).collect();
            let bad = ctx.bad(&u);
            if ctx.exceeds(&bad) {
                return AvoidingVerdict::Falsified { witness: u, bad };
            }
            // Next combination in lexicographic order.
            let mut i = size;
            loop {
                if i == 0 {
                    return AvoidingVerdict::Verified;
                }
                i -= 1;
                if idx[i] < pool.len() - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    // Greedy: repeatedly add the vertex that enlarges the bad set most,
    // preferring vertices that lie in many spots.
    let membership = |v: usize| ctx.spot_vertices.iter().filter(|vs| vs.contains(v)).count();
    let mut u = VertexSet::new();
    while u.len() < size {
        let best = pool.iter().copied().filter(|&v| !u.contains(v)).max_by_key(|&v| {
            let mut next = u.clone();
            next.insert(v);
            (ctx.bad(&next).len(), membership(v), std::cmp::Reverse(v))
        });
        match best {
            Some(v) => u.insert(v),
            None => break,
        }
    }
    let bad = ctx.bad(&u);
    if ctx.exceeds(&bad) {
        return AvoidingVerdict::Falsified { witness: u, bad };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut shuffled = pool.clone();
    for _ in 0..opts.trials {
        shuffled.shuffle(&mut rng);
        let u: VertexSet = shuffled[..size].iter().copied().collect();
        let bad = ctx.bad(&u);
        if ctx.exceeds(&bad) {
            return AvoidingVerdict::Falsified { witness: u, bad };
        }
    }
    AvoidingVerdict::NotFalsified { trials: opts.trials + 1 }
}
