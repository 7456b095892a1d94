//! Seeded realisations of degree sequences.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Edge;

/// Spreads `total` as evenly as possible over `slots`, the larger shares
/// going to a random subset.
pub fn even_split<R: Rng>(total: usize, slots: usize, rng: &mut R) -> Vec<usize> {
    if slots == 0 {
        return Vec::new();
    }
    let mut out = vec![total / slots; slots];
    let mut idx: Vec<usize> = (0..slots).collect();
    idx.shuffle(rng);
    for &i in idx.iter().take(total % slots) {
        out[i] += 1;
    }
    out
}

/// Indices sorted by remaining capacity, largest first, random ties.
fn by_capacity<R: Rng>(capacity: &[usize], rng: &mut R) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..capacity.len()).collect();
    idx.shuffle(rng);
    idx.sort_by_key(|&i| std::cmp::Reverse(capacity[i]));
    idx
}

/// Simple bipartite realisation: left items in non-increasing demand
/// order each take the distinct right items of largest remaining
/// capacity. Returns (left, right) index pairs, or None when a demand
/// cannot be met.
pub fn bipartite_greedy<R: Rng>(demand: &[usize], capacity: &[usize], rng: &mut R) -> Option<Vec<Edge>> {
    let mut capacity = capacity.to_vec();
    let mut order: Vec<usize> = (0..demand.len()).collect();
    order.shuffle(rng);
    order.sort_by_key(|&i| std::cmp::Reverse(demand[i]));
    let mut edges = Vec::new();
    for i in order {
        let picks: Vec<usize> = by_capacity(&capacity, rng).into_iter().take(demand[i]).collect();
        if picks.len() < demand[i] || picks.iter().any(|&j| capacity[j] == 0) {
            return None;
        }
        for j in picks {
            capacity[j] -= 1;
            edges.push((i, j));
        }
    }
    Some(edges)
}

/// Havel–Hakimi realisation with random tie-breaking, or None when the
/// sequence is not graphical.
pub fn havel_hakimi<R: Rng>(degrees: &[usize], rng: &mut R) -> Option<Vec<Edge>> {
    if degrees.iter().sum::<usize>() % 2 == 1 {
        return None;
    }
    let mut left = degrees.to_vec();
    let mut edges = Vec::new();
    loop {
        let order = by_capacity(&left, rng);
        let v = order[0];
        let need = left[v];
        if need == 0 {
            return Some(edges);
        }
        left[v] = 0;
        let partners: Vec<usize> = order[1..].iter().copied().take(need).collect();
        if partners.len() < need || partners.iter().any(|&u| left[u] == 0) {
            return None;
        }
        for u in partners {
            left[u] -= 1;
            edges.push(crate::graph::norm_edge(u, v));
        }
    }
}
