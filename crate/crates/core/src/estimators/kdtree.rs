//! Exact k-nearest-neighbor queries.
//!
//! A kd-tree accelerates low-dimensional clouds; above [`KDTREE_MAX_DIM`]
//! brute force wins and is used instead. Both paths return identical
//! results: neighbors ordered by squared distance with ties broken by
//! sample index, so downstream output is reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{squared_euclidean, PointCloud};

const KDTREE_MAX_DIM: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    d2: f64,
    idx: u32,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2.total_cmp(&other.d2).then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) struct NearestNeighbors<'a> {
    cloud: &'a PointCloud,
    /// Point ids arranged as an implicit balanced tree (median at the middle
    /// of each range); `None` for the brute-force path.
    tree: Option<Vec<u32>>,
}

impl<'a> NearestNeighbors<'a> {
    pub fn build(cloud: &'a PointCloud) -> Self {
        let tree = (cloud.dim() <= KDTREE_MAX_DIM).then(|| {
            let mut ids: Vec<u32> = (0..cloud.len() as u32).collect();
            build_tree(cloud, &mut ids, 0);
            ids
        });
        NearestNeighbors { cloud, tree }
    }

    /// The `k` nearest samples to `query`, ascending by (distance, index).
    /// Returns (squared distance, sample index) pairs.
    pub fn knn(&self, query: &[f64], k: usize) -> Vec<(f64, usize)> {
        let k = k.min(self.cloud.len());
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        match &self.tree {
            Some(ids) => search(self.cloud, ids, query, k, 0, &mut heap),
            None => {
                for (i, p) in self.cloud.iter().enumerate() {
                    offer(
                        &mut heap,
                        k,
                        Candidate {
                            d2: squared_euclidean(p, query),
                            idx: i as u32,
                        },
                    );
                }
            }
        }
        let mut out: Vec<(f64, usize)> = heap.into_iter().map(|c| (c.d2, c.idx as usize)).collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }
}

fn build_tree(cloud: &PointCloud, ids: &mut [u32], depth: usize) {
    if ids.len() <= 1 {
        return;
    }
    let axis = depth % cloud.dim();
    let mid = ids.len() / 2;
    ids.select_nth_unstable_by(mid, |&a, &b| {
        cloud.point(a as usize)[axis]
            .total_cmp(&cloud.point(b as usize)[axis])
            .then(a.cmp(&b))
    });
    let (left, rest) = ids.split_at_mut(mid);
    build_tree(cloud, left, depth + 1);
    build_tree(cloud, &mut rest[1..], depth + 1);
}

fn offer(heap: &mut BinaryHeap<Candidate>, k: usize, cand: Candidate) {
    if heap.len() < k {
        heap.push(cand);
    } else if let Some(worst) = heap.peek() {
        if cand < *worst {
            heap.pop();
            heap.push(cand);
        }
    }
}

fn search(
    cloud: &PointCloud,
    ids: &[u32],
    query: &[f64],
    k: usize,
    depth: usize,
    heap: &mut BinaryHeap<Candidate>,
) {
    if ids.is_empty() {
        return;
    }
    let mid = ids.len() / 2;
    let id = ids[mid];
    let p = cloud.point(id as usize);
    offer(
        heap,
        k,
        Candidate {
            d2: squared_euclidean(p, query),
            idx: id,
        },
    );
    if ids.len() == 1 {
        return;
    }
    let axis = depth % cloud.dim();
    let delta = query[axis] - p[axis];
    let (near, far) = if delta < 0.0 {
        (&ids[..mid], &ids[mid + 1..])
    } else {
        (&ids[mid + 1..], &ids[..mid])
    };
    search(cloud, near, query, k, depth + 1, heap);
    // The far half-space can still hold a candidate when the heap is not
    // full, when the splitting plane is closer than the current worst, or at
    // exact plane distance where a lower-index tie may live.
    let must_visit = heap.len() < k || heap.peek().map(|w| delta * delta <= w.d2).unwrap_or(true);
    if must_visit {
        search(cloud, far, query, k, depth + 1, heap);
    }
}
