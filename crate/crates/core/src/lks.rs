//! Large/small vertex classification and membership in the graph
//! classes LKS(n, k, eta) and its minimal variant.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rational::{ceil_usize, int, rat, Rational};

/// L = vertices of degree at least (1 + eta) k, S = the rest.
pub fn classify_ls(g: &Graph, k: usize, eta: &Rational) -> Result<(VertexSet, VertexSet)> {
    if eta < &Rational::zero() {
        return Err(Error::Domain(format!("eta must be non-negative, got {eta}")));
    }
    let threshold = (int(1) + eta) * int(k);
    let (large, small): (Vec<usize>, Vec<usize>) = (0..g.n()).partition(|&v| int(g.degree(v)) >= threshold);
    Ok((VertexSet::from(large), VertexSet::from(small)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LksViolation {
    /// Fewer than (1/2 + eta) n large vertices.
    TooFewLarge { large: usize, required: String },
    /// Two adjacent vertices both above the high-degree cap.
    AdjacentHighDegree { v: usize, u: usize, cap: usize },
    /// A neighbour of a small vertex whose degree differs from the exact target.
    SmallNeighbourDegree { small: usize, neighbour: usize, degree: usize, target: usize },
    /// More than k n edges.
    TooManyEdges { edges: usize, bound: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct LksReport {
    pub member: bool,
    pub large: VertexSet,
    pub small: VertexSet,
    pub violations: Vec<LksViolation>,
    /// Whether |L| is within one of the smallest admissible size.
    pub near_minimal_large: bool,
}

fn check_order(g: &Graph, n: usize) -> Result<()> {
    if g.n() != n {
        return Err(Error::Input(format!("graph has {} vertices, expected n = {n}", g.n())));
    }
    Ok(())
}

fn large_size_report(g: &Graph, n: usize, k: usize, eta: &Rational) -> Result<LksReport> {
    let (large, small) = classify_ls(g, k, eta)?;
    let required = (rat(1, 2) + eta) * int(n);
    let mut violations = Vec::new();
    if int(large.len()) < required {
        violations.push(LksViolation::TooFewLarge { large: large.len(), required: required.to_string() });
    }
    let near_minimal_large = large.len() <= ceil_usize(&required) + 1;
    Ok(LksReport { member: violations.is_empty(), large, small, violations, near_minimal_large })
}

/// Membership in LKS(n, k, alpha): at least (1/2 + alpha) n vertices of
/// degree at least (1 + alpha) k.
pub fn check_lks_membership(g: &Graph, n: usize, k: usize, alpha: &Rational) -> Result<LksReport> {
    check_order(g, n)?;
    large_size_report(g, n, k, alpha)
}

/// Membership in the minimal class: the LKS condition plus the three
/// degree and edge-count rules.
pub fn check_lks_small_membership(g: &Graph, n: usize, k: usize, eta: &Rational) -> Result<LksReport> {
    check_order(g, n)?;
    let mut report = large_size_report(g, n, k, eta)?;
    let cap = ceil_usize(&((int(1) + int(2) * eta) * int(k)));
    let target = ceil_usize(&((int(1) + eta) * int(k)));
    for &(u, v) in g.edges() {
        if g.degree(u) > cap && g.degree(v) > cap {
            report.violations.push(LksViolation::AdjacentHighDegree { v: u, u: v, cap });
        }
    }
    for &s in &report.small {
        for &u in g.neighbors(s) {
            if g.degree(u) != target {
                report.violations.push(LksViolation::SmallNeighbourDegree {
                    small: s,
                    neighbour: u,
                    degree: g.degree(u),
                    target,
                });
            }
        }
    }
    if g.m() > k * n {
        report.violations.push(LksViolation::TooManyEdges { edges: g.m(), bound: k * n });
    }
    report.member = report.violations.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn star_center_is_only_large_vertex() {
        let (l, s) = classify_ls(&star(5), 2, &rat(0, 1)).unwrap();
        assert_eq!(l.as_slice(), &[0]);
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn k4_with_quarter_eta_is_all_large() {
        let (l, s) = classify_ls(&Graph::complete(4), 2, &rat(1, 4)).unwrap();
        assert_eq!(l.len(), 4);
        assert!(s.is_empty());
    }

    #[test]
    fn threshold_is_exact_rational() {
        // (1 + 1/2) * 2 = 3: degree 3 qualifies, degree 2 does not.
        let (l, _) = classify_ls(&star(3), 2, &rat(1, 2)).unwrap();
        assert_eq!(l.as_slice(), &[0]);
    }

    #[test]
    fn negative_eta_rejected() {
        assert!(classify_ls(&star(2), 1, &rat(-1, 10)).is_err());
    }

    #[test]
    fn six_cycle_is_member() {
        let edges: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let g = Graph::new(6, &edges).unwrap();
        let r = check_lks_membership(&g, 6, 2, &rat(0, 1)).unwrap();
        assert!(r.member);
        assert_eq!(r.large.len(), 6);
    }

    #[test]
    fn order_mismatch_is_input_error() {
        assert!(check_lks_membership(&star(2), 4, 1, &rat(0, 1)).is_err());
    }

    #[test]
    fn k33_violates_high_degree_rule() {
        let edges: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        let g = Graph::new(6, &edges).unwrap();
        let r = check_lks_small_membership(&g, 6, 2, &rat(0, 1)).unwrap();
        assert!(!r.member);
        assert!(matches!(r.violations[0], LksViolation::AdjacentHighDegree { .. }));
    }

    #[test]
    fn star_k13_is_small_member() {
        let r = check_lks_small_membership(&star(3), 4, 1, &rat(0, 1)).unwrap();
        assert!(r.member, "{:?}", r.violations);
        assert!(r.small.is_empty());
    }

    #[test]
    fn too_many_edges_flagged() {
        let r = check_lks_small_membership(&Graph::complete(5), 5, 1, &rat(0, 1)).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, LksViolation::TooManyEdges { .. })));
    }
}
