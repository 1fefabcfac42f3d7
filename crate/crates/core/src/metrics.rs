//! Bottleneck and p-Wasserstein distances between persistence diagrams,
//! restricted to one homological dimension.
//!
//! The ground metric on the plane is L-infinity; matching a point to the
//! diagonal costs half its lifetime. Essential classes are compared only
//! against essential classes of the same dimension (cost |birth - birth|);
//! diagrams with mismatched essential counts are infinitely far apart and
//! the sentinel `f64::INFINITY` is returned.

use crate::error::{Error, Result};
use crate::persistence::{DiagramPoint, PersistenceDiagram};

/// Bottleneck distance, computed exactly: binary search over the finite
/// candidate set of pairwise costs with a maximum-cardinality bipartite
/// matching feasibility test at each probe.
pub fn bottleneck(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    dimension: usize,
) -> Result<f64> {
    let (finite1, ess1) = split(d1, d2, dimension)?;
    let (finite2, ess2) = split(d2, d1, dimension)?;
    let essential_part = match essential_costs(&ess1, &ess2) {
        Some(costs) => costs.into_iter().fold(0.0, f64::max),
        None => return Ok(f64::INFINITY),
    };
    Ok(essential_part.max(bottleneck_finite(&finite1, &finite2)))
}

/// p-Wasserstein distance: the p-th root of the minimal sum of p-th powers of
/// L-infinity costs over an exact assignment, with each diagram augmented by
/// the diagonal projections of the other side's points.
pub fn wasserstein(
    d1: &PersistenceDiagram,
    d2: &PersistenceDiagram,
    p: f64,
    dimension: usize,
) -> Result<f64> {
    if p < 1.0 || !p.is_finite() {
        return Err(Error::invalid_parameter("p", "must satisfy p >= 1"));
    }
    let (finite1, ess1) = split(d1, d2, dimension)?;
    let (finite2, ess2) = split(d2, d1, dimension)?;
    let essential_sum: f64 = match essential_costs(&ess1, &ess2) {
        Some(costs) => costs.into_iter().map(|c| c.powf(p)).sum(),
        None => return Ok(f64::INFINITY),
    };
    let finite_sum = assignment_cost(&finite1, &finite2, p);
    Ok((essential_sum + finite_sum).powf(1.0 / p))
}

fn split(
    d: &PersistenceDiagram,
    other: &PersistenceDiagram,
    dimension: usize,
) -> Result<(Vec<DiagramPoint>, Vec<f64>)> {
    if d.orientation() != other.orientation() {
        return Err(Error::OrientationMismatch);
    }
    let mut finite = Vec::new();
    let mut essential_births = Vec::new();
    for p in d.restrict(dimension) {
        if p.essential {
            essential_births.push(p.birth);
        } else {
            finite.push(p);
        }
    }
    Ok((finite, essential_births))
}

/// Sorted matching of essential births; `None` signals a count mismatch.
/// Matching sorted order is optimal on the line for both the max and any
/// convex sum of the costs.
fn essential_costs(b1: &[f64], b2: &[f64]) -> Option<Vec<f64>> {
    if b1.len() != b2.len() {
        return None;
    }
    let mut s1 = b1.to_vec();
    let mut s2 = b2.to_vec();
    s1.sort_by(f64::total_cmp);
    s2.sort_by(f64::total_cmp);
    Some(s1.iter().zip(&s2).map(|(a, b)| (a - b).abs()).collect())
}

fn linf(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn diagonal_cost(p: &DiagramPoint) -> f64 {
    p.lifetime() / 2.0
}

fn bottleneck_finite(d1: &[DiagramPoint], d2: &[DiagramPoint]) -> f64 {
    if d1.is_empty() && d2.is_empty() {
        return 0.0;
    }
    // Candidate values: every pairwise cost and every diagonal cost.
    let mut candidates = vec![0.0];
    for a in d1 {
        candidates.push(diagonal_cost(a));
        for b in d2 {
            candidates.push(linf(a, b));
        }
    }
    candidates.extend(d2.iter().map(diagonal_cost));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let (mut lo, mut hi) = (0, candidates.len() - 1);
    debug_assert!(matching_feasible(d1, d2, candidates[hi]));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matching_feasible(d1, d2, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Is there a perfect matching of max cost at most `threshold`? Left side is
/// `d1` plus one diagonal slot per `d2` point; right side is `d2` plus one
/// diagonal slot per `d1` point. A real point may use only its own diagonal
/// projection; diagonal slots pair with each other for free.
fn matching_feasible(d1: &[DiagramPoint], d2: &[DiagramPoint], threshold: f64) -> bool {
    let (n1, n2) = (d1.len(), d2.len());
    let total = n1 + n2;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (i, a) in d1.iter().enumerate() {
        for (j, b) in d2.iter().enumerate() {
            if linf(a, b) <= threshold {
                adj[i].push(j);
            }
        }
        if diagonal_cost(a) <= threshold {
            adj[i].push(n2 + i);
        }
    }
    for (j, b) in d2.iter().enumerate() {
        let left = n1 + j;
        if diagonal_cost(b) <= threshold {
            adj[left].push(j);
        }
        for i in 0..n1 {
            adj[left].push(n2 + i);
        }
    }
    maximum_matching(&adj, total) == total
}

/// Augmenting-path maximum bipartite matching.
fn maximum_matching(adj: &[Vec<usize>], right_count: usize) -> usize {
    let mut match_right: Vec<Option<usize>> = vec![None; right_count];
    let mut size = 0;
    let mut visited = vec![false; right_count];
    for left in 0..adj.len() {
        visited.iter_mut().for_each(|v| *v = false);
        if augment(adj, left, &mut match_right, &mut visited) {
            size += 1;
        }
    }
    size
}

fn augment(
    adj: &[Vec<usize>],
    left: usize,
    match_right: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &r in &adj[left] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        if match_right[r].is_none() || augment(adj, match_right[r].unwrap(), match_right, visited) {
            match_right[r] = Some(left);
            return true;
        }
    }
    false
}

/// Minimal total p-th-power cost over exact assignments of the augmented
/// bipartite problem (diagonal-to-diagonal pairs cost nothing).
fn assignment_cost(d1: &[DiagramPoint], d2: &[DiagramPoint], p: f64) -> f64 {
    let (n1, n2) = (d1.len(), d2.len());
    let total = n1 + n2;
    if total == 0 {
        return 0.0;
    }
    let mut cost = vec![0.0; total * total];
    for i in 0..total {
        for j in 0..total {
            let c = match (i < n1, j < n2) {
                (true, true) => linf(&d1[i], &d2[j]),
                (true, false) => diagonal_cost(&d1[i]),
                (false, true) => diagonal_cost(&d2[j]),
                (false, false) => 0.0,
            };
            cost[i * total + j] = c.powf(p);
        }
    }
    hungarian(&cost, total)
}

/// O(n^3) Hungarian algorithm (shortest augmenting paths with potentials)
/// for a square cost matrix; returns the optimal assignment cost.
fn hungarian(cost: &[f64], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    // 1-based potentials and matching arrays, the classical formulation.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j] = row matched to column j
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut total = 0.0;
    for j in 1..=n {
        if p[j] > 0 {
            total += cost[(p[j] - 1) * n + (j - 1)];
        }
    }
    total
}
