//! Cluster-tree structure checks: the union-find sweep against a
//! from-scratch graph traversal, nestedness, and permutation invariance.

mod common;

use std::collections::HashSet;

use rand::Rng;
use tda_core::clustering::{cluster_tree, knn_graph, ClusterTree, DensityKind};
use tda_core::rng::{derive_seed, rng_from_seed};
use tda_core::sample::gaussian_cloud;
use tda_core::PointCloud;

fn random_cloud(rng: &mut tda_core::rng::TdaRng, n: usize) -> PointCloud {
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![3.0 * rng.random::<f64>(), 3.0 * rng.random::<f64>()])
        .collect();
    PointCloud::new(&pts).unwrap()
}

/// Components of the strictly-active subgraph by breadth-first traversal.
fn bfs_partition(adjacency: &[Vec<usize>], densities: &[f64], level: f64) -> Vec<Vec<usize>> {
    let n = densities.len();
    let active: Vec<bool> = densities.iter().map(|&d| d > level).collect();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if !active[start] || seen[start] {
            continue;
        }
        let mut queue = vec![start];
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(p) = queue.pop() {
            comp.push(p);
            for &q in &adjacency[p] {
                if active[q] && !seen[q] {
                    seen[q] = true;
                    queue.push(q);
                }
            }
        }
        comp.sort_unstable();
        parts.push(comp);
    }
    parts.sort();
    parts
}

#[test]
fn tree_partition_matches_graph_traversal_at_every_level() {
    for trial in 0..25u64 {
        let mut rng = rng_from_seed(derive_seed(0xC1u64, trial));
        let n = rng.random_range(4..=20);
        let k = rng.random_range(1..=n.min(5));
        let x = random_cloud(&mut rng, n);
        let tree = cluster_tree(&x, k, DensityKind::Knn, None).unwrap();
        let adjacency = knn_graph(&x, k);

        let mut levels: Vec<f64> = tree.densities.clone();
        levels.push(0.0);
        // Also probe between consecutive density values.
        let mut sorted = tree.densities.clone();
        sorted.sort_by(f64::total_cmp);
        for w in sorted.windows(2) {
            levels.push(0.5 * (w[0] + w[1]));
        }
        for level in levels {
            assert_eq!(
                tree.partition_at(level),
                bfs_partition(&adjacency, &tree.densities, level),
                "trial {trial}, level {level}"
            );
        }
    }
}

#[test]
fn branch_members_partition_the_sample() {
    for trial in 0..25u64 {
        let mut rng = rng_from_seed(derive_seed(0xC2u64, trial));
        let n = rng.random_range(3..=25);
        let x = random_cloud(&mut rng, n);
        let tree = cluster_tree(&x, 2.min(n), DensityKind::Knn, None).unwrap();
        let mut all: Vec<usize> = tree
            .branches
            .iter()
            .flat_map(|b| b.members.iter().copied())
            .collect();
        all.sort_unstable();
        assert_eq!(all, (0..n).collect::<Vec<_>>());
    }
}

#[test]
fn nestedness_and_monotone_alpha() {
    for trial in 0..25u64 {
        let mut rng = rng_from_seed(derive_seed(0xC3u64, trial));
        let n = rng.random_range(5..=20);
        let x = random_cloud(&mut rng, n);
        let tree = cluster_tree(&x, 3.min(n), DensityKind::Knn, None).unwrap();
        for b in &tree.branches {
            // Child member sets are contained in the parent's cumulative set.
            if let Some(parent) = b.parent {
                let child: HashSet<usize> = tree.cumulative_members(b.id).into_iter().collect();
                let parent_set: HashSet<usize> =
                    tree.cumulative_members(parent).into_iter().collect();
                assert!(child.is_subset(&parent_set));
                let pb = &tree.branches[parent];
                // The parent's interval sits below the child's.
                assert!(pb.lambda_death <= b.lambda_birth);
            }
            assert!(b.lambda_birth <= b.lambda_death);
            assert!(b.alpha_birth >= b.alpha_death);
            assert!((0.0..=1.0).contains(&b.alpha_birth));
            assert!((0.0..=1.0).contains(&b.alpha_death));
        }
        // Active sets shrink as the level rises.
        let mut sorted = tree.densities.clone();
        sorted.sort_by(f64::total_cmp);
        let mut previous: Option<HashSet<usize>> = None;
        for &level in sorted.iter().rev() {
            let active: HashSet<usize> = tree.partition_at(level).into_iter().flatten().collect();
            if let Some(prev) = &previous {
                assert!(prev.is_subset(&active));
            }
            previous = Some(active);
        }
    }
}

#[test]
fn permutation_invariance_up_to_branch_relabeling() {
    let mut rng = rng_from_seed(0xC4);
    let n = 14;
    let x = random_cloud(&mut rng, n);
    let tree1 = cluster_tree(&x, 3, DensityKind::Knn, None).unwrap();

    // Reverse the rows and map point ids back.
    let reversed: Vec<Vec<f64>> = (0..n).rev().map(|i| x.point(i).to_vec()).collect();
    let y = PointCloud::new(&reversed).unwrap();
    let tree2 = cluster_tree(&y, 3, DensityKind::Knn, None).unwrap();

    let relabel = |tree: &ClusterTree, flip: bool| -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = tree
            .branches
            .iter()
            .map(|b| {
                let mut m: Vec<usize> = b
                    .members
                    .iter()
                    .map(|&i| if flip { n - 1 - i } else { i })
                    .collect();
                m.sort_unstable();
                m
            })
            .collect();
        sets.sort();
        sets
    };
    assert_eq!(relabel(&tree1, false), relabel(&tree2, true));

    let mut lambdas1: Vec<(u64, u64)> = tree1
        .branches
        .iter()
        .map(|b| (b.lambda_birth.to_bits(), b.lambda_death.to_bits()))
        .collect();
    let mut lambdas2: Vec<(u64, u64)> = tree2
        .branches
        .iter()
        .map(|b| (b.lambda_birth.to_bits(), b.lambda_death.to_bits()))
        .collect();
    lambdas1.sort_unstable();
    lambdas2.sort_unstable();
    assert_eq!(lambdas1, lambdas2);
}

#[test]
fn three_separated_blobs_make_three_leaves() {
    let mut rng = rng_from_seed(0xC5);
    let blobs = [
        gaussian_cloud(60, &[0.0, 0.0], &[0.4, 0.4], &mut rng).unwrap(),
        gaussian_cloud(60, &[8.0, 0.0], &[0.4, 0.4], &mut rng).unwrap(),
        gaussian_cloud(60, &[4.0, 7.0], &[0.4, 0.4], &mut rng).unwrap(),
    ];
    let x = tda_core::sample::stack(&blobs).unwrap();
    let tree = cluster_tree(&x, 20, DensityKind::Knn, None).unwrap();
    assert_eq!(tree.leaves.len(), 3);
    // Each leaf's cumulative membership is dominated by one blob.
    for &leaf in &tree.leaves {
        let members = tree.cumulative_members(leaf);
        let counts = members.iter().fold([0usize; 3], |mut acc, &i| {
            acc[i / 60] += 1;
            acc
        });
        let max = *counts.iter().max().unwrap();
        assert!(max * 10 >= members.len() * 9, "mixed leaf: {counts:?}");
    }
}
