//! Density cluster trees: estimate a density at the sample points, sweep its
//! superlevel sets over a k-nearest-neighbor graph, and encode the component
//! hierarchy as a branch tree with λ (density level), α (upper-tail mass)
//! and κ (branch mass) coordinates.
//!
//! Conventions, fixed for determinism:
//! * the neighbor list of a point is its `k` nearest *other* sample points
//!   (capped at `n - 1`), ties broken by index; edges are symmetrized by
//!   union (an edge exists when either endpoint lists the other);
//! * the sweep visits the distinct estimated density values from highest to
//!   lowest, all points of equal density simultaneously, and closes every
//!   surviving branch at level 0;
//! * a branch spans `[lambda_birth, lambda_death)` with `birth <= death`:
//!   `lambda_death` is the level where its component appears,
//!   `lambda_birth` the level where it merges into a parent (0 for roots).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{kde, knn_de, NearestNeighbors, PointCloud};

/// Density estimator used at the sample points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Knn,
    Kde,
}

/// One branch of the cluster hierarchy.
///
/// `members` holds the points that first enter the tree through this branch:
/// the member sets of all branches partition the sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub id: usize,
    pub parent: Option<usize>,
    pub lambda_birth: f64,
    pub lambda_death: f64,
    pub alpha_birth: f64,
    pub alpha_death: f64,
    pub kappa_birth: f64,
    pub kappa_death: f64,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterTree {
    pub branches: Vec<Branch>,
    /// Leaf branch ids in dendrogram layout order.
    pub leaves: Vec<usize>,
    /// Estimated density at each sample point.
    pub densities: Vec<f64>,
}

impl ClusterTree {
    pub fn roots(&self) -> Vec<usize> {
        self.branches
            .iter()
            .filter(|b| b.parent.is_none())
            .map(|b| b.id)
            .collect()
    }

    pub fn children_of(&self, id: usize) -> Vec<usize> {
        self.branches
            .iter()
            .filter(|b| b.parent == Some(id))
            .map(|b| b.id)
            .collect()
    }

    /// Member ids of a branch together with all of its descendants.
    pub fn cumulative_members(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(b) = stack.pop() {
            out.extend_from_slice(&self.branches[b].members);
            stack.extend(self.children_of(b));
        }
        out.sort_unstable();
        out
    }

    /// The partition of the active points `{i : density_i > level}` into the
    /// components encoded by the tree, reconstructed from branch intervals
    /// and memberships. Components come sorted by smallest member.
    pub fn partition_at(&self, level: f64) -> Vec<Vec<usize>> {
        let mut parts: Vec<Vec<usize>> = self
            .branches
            .iter()
            .filter(|b| b.lambda_birth <= level && level < b.lambda_death)
            .map(|b| {
                let mut pts: Vec<usize> = self
                    .cumulative_members(b.id)
                    .into_iter()
                    .filter(|&i| self.densities[i] > level)
                    .collect();
                pts.sort_unstable();
                pts
            })
            .filter(|pts| !pts.is_empty())
            .collect();
        parts.sort();
        parts
    }
}

/// Symmetrized k-nearest-neighbor adjacency lists: `j` is adjacent to `i`
/// when `j` is among the `k` nearest other points of `i` or vice versa.
pub fn knn_graph(x: &PointCloud, k: usize) -> Vec<Vec<usize>> {
    let n = x.len();
    let nn = NearestNeighbors::build(x);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let neighbors = nn.knn(x.point(i), (k + 1).min(n));
        let mut added = 0;
        for (_, j) in neighbors {
            if j == i || added == k {
                continue;
            }
            added += 1;
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    adjacency
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns (new root, old other root) or `None` if already joined.
    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        Some((big, small))
    }
}

/// Builds the cluster tree of `x` for the chosen density estimator. `k`
/// always drives the connectivity graph; `h` is required when the density is
/// kernel-based.
pub fn cluster_tree(
    x: &PointCloud,
    k: usize,
    density: DensityKind,
    h: Option<f64>,
) -> Result<ClusterTree> {
    let n = x.len();
    if k < 1 || k > n {
        return Err(Error::invalid_parameter(
            "k",
            format!("must satisfy 1 <= k <= n = {n}"),
        ));
    }
    let densities = match density {
        DensityKind::Knn => knn_de(x, x, k)?,
        DensityKind::Kde => {
            let h =
                h.ok_or_else(|| Error::invalid_parameter("h", "required when density = kde"))?;
            kde(x, x, h)?
        }
    };
    let adjacency = knn_graph(x, k);
    Ok(sweep(&densities, &adjacency))
}

/// Upper-tail mass α(λ) = #{i : density_i > λ} / n, from densities sorted
/// descending.
fn alpha_at(sorted_desc: &[f64], level: f64) -> f64 {
    let count = sorted_desc.partition_point(|&d| d > level);
    count as f64 / sorted_desc.len() as f64
}

fn sweep(densities: &[f64], adjacency: &[Vec<usize>]) -> ClusterTree {
    let n = densities.len();
    let nf = n as f64;
    let mut sorted_desc = densities.to_vec();
    sorted_desc.sort_by(|a, b| b.total_cmp(a));

    // Points grouped by density value, highest first, ties together.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| densities[b].total_cmp(&densities[a]).then(a.cmp(&b)));

    const NO_BRANCH: usize = usize::MAX;
    let mut uf = UnionFind::new(n);
    let mut active = vec![false; n];
    // Valid at union-find roots only.
    let mut current_branch = vec![NO_BRANCH; n];
    let mut old_branches: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Running component size per open branch.
    let mut branch_size: Vec<usize> = Vec::new();
    let mut branches: Vec<Branch> = Vec::new();

    let mut start = 0;
    while start < order.len() {
        let level = densities[order[start]];
        let mut end = start;
        while end < order.len() && densities[order[end]] == level {
            end += 1;
        }
        let group = &order[start..end];

        for &p in group {
            active[p] = true;
        }
        for &p in group {
            for &q in &adjacency[p] {
                if !active[q] {
                    continue;
                }
                if let Some((root, absorbed)) = uf.union(p, q) {
                    // Collect the branches of everything merged so far; the
                    // surviving root carries the set.
                    let mut carried = std::mem::take(&mut old_branches[absorbed]);
                    old_branches[root].append(&mut carried);
                    for r in [root, absorbed] {
                        let b = current_branch[r];
                        if b != NO_BRANCH {
                            if !old_branches[root].contains(&b) {
                                old_branches[root].push(b);
                            }
                            current_branch[r] = NO_BRANCH;
                        }
                    }
                }
            }
        }

        // Group the new points by their final component.
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for &p in group {
            by_root.entry(uf.find(p)).or_default().push(p);
        }
        let mut roots: Vec<usize> = by_root.keys().copied().collect();
        roots.sort_unstable();
        let alpha = alpha_at(&sorted_desc, level);
        for root in roots {
            let new_points = &by_root[&root];
            let mut olds = std::mem::take(&mut old_branches[root]);
            olds.sort_unstable();
            olds.dedup();
            match olds.len() {
                0 => {
                    // A fresh component: new leaf branch.
                    let id = branches.len();
                    branches.push(Branch {
                        id,
                        parent: None,
                        lambda_birth: f64::NAN,
                        lambda_death: level,
                        alpha_birth: f64::NAN,
                        alpha_death: alpha,
                        kappa_birth: f64::NAN,
                        kappa_death: uf.size[root] as f64 / nf,
                        members: new_points.clone(),
                    });
                    branch_size.push(uf.size[root]);
                    current_branch[root] = id;
                }
                1 => {
                    // The component absorbed new points but kept its branch.
                    let b = olds[0];
                    branches[b].members.extend_from_slice(new_points);
                    branch_size[b] = uf.size[root];
                    current_branch[root] = b;
                }
                _ => {
                    // Two or more branches merged: children close here, a
                    // parent branch is born.
                    let id = branches.len();
                    for &child in &olds {
                        branches[child].parent = Some(id);
                        branches[child].lambda_birth = level;
                        branches[child].alpha_birth = alpha;
                        branches[child].kappa_birth = branch_size[child] as f64 / nf;
                    }
                    branches.push(Branch {
                        id,
                        parent: None,
                        lambda_birth: f64::NAN,
                        lambda_death: level,
                        alpha_birth: f64::NAN,
                        alpha_death: alpha,
                        kappa_birth: f64::NAN,
                        kappa_death: uf.size[root] as f64 / nf,
                        members: new_points.clone(),
                    });
                    branch_size.push(uf.size[root]);
                    current_branch[root] = id;
                }
            }
        }
        start = end;
    }

    // Every surviving branch spans down to level 0.
    for p in 0..n {
        let root = uf.find(p);
        let b = current_branch[root];
        if b != NO_BRANCH && branches[b].lambda_birth.is_nan() {
            branches[b].lambda_birth = 0.0;
            branches[b].alpha_birth = alpha_at(&sorted_desc, 0.0);
            branches[b].kappa_birth = branch_size[b] as f64 / nf;
        }
    }

    for b in &mut branches {
        b.members.sort_unstable();
    }
    let leaves = layout_leaves(&branches);
    ClusterTree {
        branches,
        leaves,
        densities: densities.to_vec(),
    }
}

/// Leaves in depth-first order, roots and children visited by ascending id.
fn layout_leaves(branches: &[Branch]) -> Vec<usize> {
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); branches.len()];
    let mut roots = Vec::new();
    for b in branches {
        match b.parent {
            Some(p) => children[p].push(b.id),
            None => roots.push(b.id),
        }
    }
    roots.sort_unstable();
    let mut leaves = Vec::new();
    let mut stack: Vec<usize> = roots.into_iter().rev().collect();
    while let Some(id) = stack.pop() {
        if children[id].is_empty() {
            leaves.push(id);
        } else {
            children[id].sort_unstable();
            for &c in children[id].iter().rev() {
                stack.push(c);
            }
        }
    }
    leaves
}
