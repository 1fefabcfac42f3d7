//! Ordered simplicial filtrations.
//!
//! Two constructions are provided: a lower-star filtration of a scalar field
//! on a rectilinear grid (every hypercube cell triangulated by the
//! Freudenthal/Kuhn scheme into `d!` simplices, each simplex entering at the
//! max of its vertex values), and the Vietoris–Rips filtration of a point
//! cloud or distance matrix (every simplex whose vertex set has pairwise
//! distances at most `maxscale`, entering at its diameter).
//!
//! Simplices are kept in a canonical order — by (value, dimension,
//! lexicographic vertices) — so downstream reduction output is reproducible
//! byte for byte.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::estimators::{PointCloud, ScalarField};

/// A simplex as its strictly increasing vertex id tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    vertices: Vec<u32>,
}

impl Simplex {
    pub fn new(mut vertices: Vec<u32>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        assert!(!vertices.is_empty(), "a simplex has at least one vertex");
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The codimension-1 faces, or nothing for a vertex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.vertices.len();
        (0..n).filter(move |_| n > 1).map(move |skip| {
            let verts = self
                .vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, &v)| v)
                .collect();
            Simplex { vertices: verts }
        })
    }
}

/// A filtered simplicial complex: simplices with their filtration values, in
/// canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    values: Vec<f64>,
}

impl Filtration {
    /// Assembles and canonically orders a filtration, rejecting non-finite
    /// values.
    pub fn new(mut entries: Vec<(Simplex, f64)>) -> Result<Self> {
        if entries.iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "filtration values",
            });
        }
        entries.sort_by(|(sa, va), (sb, vb)| {
            va.total_cmp(vb)
                .then(sa.dimension().cmp(&sb.dimension()))
                .then(sa.cmp(sb))
        });
        let (simplices, values) = entries.into_iter().unzip();
        Ok(Filtration { simplices, values })
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn value(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_dimension(&self) -> usize {
        self.simplices
            .iter()
            .map(Simplex::dimension)
            .max()
            .unwrap_or(0)
    }

    /// Index lookup by vertex tuple.
    pub fn index_map(&self) -> HashMap<&[u32], usize> {
        self.simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.vertices(), i))
            .collect()
    }

    /// Checks face closure, value monotonicity and that the stored order is a
    /// linear extension of the face partial order.
    pub fn validate(&self) -> Result<()> {
        let index = self.index_map();
        if index.len() != self.simplices.len() {
            return Err(Error::InvalidFiltration {
                reason: "duplicate simplices".into(),
            });
        }
        for (i, s) in self.simplices.iter().enumerate() {
            for facet in s.facets() {
                match index.get(facet.vertices()) {
                    None => {
                        return Err(Error::InvalidFiltration {
                            reason: format!(
                                "missing face {:?} of {:?}",
                                facet.vertices(),
                                s.vertices()
                            ),
                        })
                    }
                    Some(&j) => {
                        if self.values[j] > self.values[i] {
                            return Err(Error::InvalidFiltration {
                                reason: format!(
                                    "face value {} exceeds coface value {}",
                                    self.values[j], self.values[i]
                                ),
                            });
                        }
                        if j >= i {
                            return Err(Error::InvalidFiltration {
                                reason: "order is not a linear extension of the face order".into(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Debug dump, one simplex per line: `value;v0,v1,...`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (s, v) in self.simplices.iter().zip(&self.values) {
            let verts: Vec<String> = s.vertices().iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{};{}\n", v, verts.join(",")));
        }
        out
    }
}

/// An `n x n` symmetric matrix of non-negative distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    data: Vec<f64>,
    n: usize,
}

impl DistanceMatrix {
    const SYM_TOL: f64 = 1e-12;

    pub fn new(data: Vec<f64>, n: usize) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::InvalidDistanceMatrix {
                reason: format!("expected {n}x{n} entries, got {}", data.len()),
            });
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidDistanceMatrix {
                    reason: format!("nonzero diagonal at {i}"),
                });
            }
            for j in 0..n {
                let d = data[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidDistanceMatrix {
                        reason: format!("negative or non-finite entry at ({i}, {j})"),
                    });
                }
                if (d - data[j * n + i]).abs() > Self::SYM_TOL {
                    return Err(Error::InvalidDistanceMatrix {
                        reason: format!("asymmetry at ({i}, {j})"),
                    });
                }
            }
        }
        Ok(DistanceMatrix { data, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Lower-star filtration of a scalar field over the Freudenthal triangulation
/// of its grid. With `sublevel = false` the values are negated here and the
/// diagram is re-negated downstream; there is no separate superlevel code
/// path.
pub fn build_grid_filtration(field: &ScalarField, sublevel: bool) -> Result<Filtration> {
    let grid = field.grid();
    let dim = grid.dim();
    let sizes = grid.axis_lens();
    let sign = if sublevel { 1.0 } else { -1.0 };
    let values: Vec<f64> = field.values().iter().map(|v| sign * v).collect();

    // Strides of the flattened row-major order (first axis fastest).
    let mut strides = vec![1usize; dim];
    for k in 1..dim {
        strides[k] = strides[k - 1] * sizes[k - 1];
    }

    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut entries: Vec<(Simplex, f64)> = Vec::new();
    let mut add = |verts: Vec<u32>, entries: &mut Vec<(Simplex, f64)>| {
        if seen.insert(verts.clone()) {
            let value = verts
                .iter()
                .map(|&v| values[v as usize])
                .fold(f64::NEG_INFINITY, f64::max);
            entries.push((Simplex { vertices: verts }, value));
        }
    };

    // Vertices.
    for v in 0..values.len() {
        add(vec![v as u32], &mut entries);
    }

    // One maximal simplex per (cell, axis permutation); all proper faces
    // follow by subset enumeration.
    let cell_counts: Vec<usize> = sizes.iter().map(|s| s - 1).collect();
    let mut cell = vec![0usize; dim];
    let num_cells: usize = cell_counts.iter().product();
    let permutations = permutations(dim);
    for _ in 0..num_cells {
        let base: usize = cell.iter().zip(&strides).map(|(c, s)| c * s).sum();
        for perm in &permutations {
            let mut verts = Vec::with_capacity(dim + 1);
            let mut v = base;
            verts.push(v as u32);
            for &axis in perm {
                v += strides[axis];
                verts.push(v as u32);
            }
            verts.sort_unstable();
            for mask in 1..(1u32 << verts.len()) {
                let subset: Vec<u32> = verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                add(subset, &mut entries);
            }
        }
        // Advance the cell multi-index.
        for k in 0..dim {
            cell[k] += 1;
            if cell[k] < cell_counts[k] {
                break;
            }
            cell[k] = 0;
        }
    }

    Filtration::new(entries)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out
}

fn permute(items: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == items.len() {
        out.push(items.clone());
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, out);
        items.swap(start, i);
    }
}

/// Input to a Rips filtration.
pub enum RipsInput<'a> {
    Points(&'a PointCloud),
    Distances(&'a DistanceMatrix),
}

/// Vietoris–Rips filtration: all simplices of dimension at most
/// `maxdimension + 1` whose vertex set has pairwise distances at most
/// `maxscale`. Simplex value is the max pairwise distance (0 for vertices).
///
/// Construction enumerates edges under `maxscale` and expands cliques by
/// lower-neighbor intersection.
pub fn build_rips_filtration(
    input: RipsInput<'_>,
    maxdimension: usize,
    maxscale: f64,
) -> Result<Filtration> {
    if maxscale <= 0.0 || !maxscale.is_finite() {
        return Err(Error::invalid_parameter(
            "maxscale",
            "must be a positive real",
        ));
    }
    let matrix;
    let dist = match input {
        RipsInput::Points(cloud) => {
            matrix = cloud.distance_matrix();
            &matrix
        }
        RipsInput::Distances(m) => m,
    };
    let n = dist.len();
    let max_vertices = maxdimension + 2;

    // lower_neighbors[v] = {u < v : d(u, v) <= maxscale}, ascending.
    let mut lower_neighbors: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (v, neighbors) in lower_neighbors.iter_mut().enumerate() {
        for u in 0..v {
            if dist.get(u, v) <= maxscale {
                neighbors.push(u as u32);
            }
        }
    }

    let mut entries: Vec<(Simplex, f64)> = Vec::new();
    let mut stack_verts: Vec<u32> = Vec::new();
    for v in 0..n {
        stack_verts.push(v as u32);
        expand_cliques(
            dist,
            &lower_neighbors,
            &mut stack_verts,
            &lower_neighbors[v],
            0.0,
            max_vertices,
            &mut entries,
        );
        stack_verts.pop();
    }
    Filtration::new(entries)
}

/// Adds the simplex on `verts` (diameter `diameter`), then extends it by
/// every common lower neighbor.
fn expand_cliques(
    dist: &DistanceMatrix,
    lower_neighbors: &[Vec<u32>],
    verts: &mut Vec<u32>,
    candidates: &[u32],
    diameter: f64,
    max_vertices: usize,
    entries: &mut Vec<(Simplex, f64)>,
) {
    let mut sorted = verts.clone();
    sorted.sort_unstable();
    entries.push((Simplex { vertices: sorted }, diameter));
    if verts.len() >= max_vertices {
        return;
    }
    for &u in candidates {
        let new_diameter = verts
            .iter()
            .map(|&w| dist.get(u as usize, w as usize))
            .fold(diameter, f64::max);
        let next: Vec<u32> = candidates
            .iter()
            .copied()
            .filter(|c| lower_neighbors[u as usize].binary_search(c).is_ok())
            .collect();
        verts.push(u);
        expand_cliques(
            dist,
            lower_neighbors,
            verts,
            &next,
            new_diameter,
            max_vertices,
            entries,
        );
        verts.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::EvaluationGrid;

    fn field_1d(values: Vec<f64>) -> ScalarField {
        let n = values.len();
        let grid = EvaluationGrid::new(&[(0.0, (n - 1) as f64)], 1.0).unwrap();
        ScalarField::new(grid, values).unwrap()
    }

    #[test]
    fn grid_filtration_1d_edge_values() {
        let f = build_grid_filtration(&field_1d(vec![0.0, 2.0, 1.0, 3.0]), true).unwrap();
        f.validate().unwrap();
        let vertices = f.simplices().iter().filter(|s| s.dimension() == 0).count();
        let mut edge_values: Vec<f64> = f
            .simplices()
            .iter()
            .zip(f.values())
            .filter(|(s, _)| s.dimension() == 1)
            .map(|(_, &v)| v)
            .collect();
        edge_values.sort_by(f64::total_cmp);
        assert_eq!(vertices, 4);
        assert_eq!(edge_values, vec![2.0, 2.0, 3.0]);
    }

    #[test]
    fn grid_filtration_2x2_counts() {
        let grid = EvaluationGrid::new(&[(0.0, 1.0), (0.0, 1.0)], 1.0).unwrap();
        let field = ScalarField::new(grid, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let f = build_grid_filtration(&field, true).unwrap();
        f.validate().unwrap();
        let count_dim = |d: usize| f.simplices().iter().filter(|s| s.dimension() == d).count();
        assert_eq!(count_dim(0), 4);
        assert_eq!(count_dim(1), 5); // 4 sides + 1 diagonal
        assert_eq!(count_dim(2), 2);
    }

    #[test]
    fn grid_filtration_constant_field_is_valid() {
        let f = build_grid_filtration(&field_1d(vec![1.5; 5]), true).unwrap();
        f.validate().unwrap();
        assert!(f.values().iter().all(|&v| v == 1.5));
    }

    #[test]
    fn grid_filtration_superlevel_negates() {
        let f = build_grid_filtration(&field_1d(vec![0.0, 2.0]), false).unwrap();
        f.validate().unwrap();
        assert_eq!(f.value(0), -2.0); // vertex with field value 2 enters first
    }

    #[test]
    fn grid_simplex_count_is_value_independent() {
        let a = build_grid_filtration(&field_1d(vec![0.0, 5.0, 2.0]), true).unwrap();
        let b = build_grid_filtration(&field_1d(vec![9.0, 1.0, 4.0]), true).unwrap();
        assert_eq!(a.len(), b.len());
    }

    fn unit_square() -> PointCloud {
        PointCloud::new(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]).unwrap()
    }

    #[test]
    fn rips_two_points() {
        let cloud = PointCloud::new(&[&[0.0], &[1.0]]).unwrap();
        let f = build_rips_filtration(RipsInput::Points(&cloud), 0, 2.0).unwrap();
        f.validate().unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.value(2), 1.0);

        let far = PointCloud::new(&[&[0.0], &[3.0]]).unwrap();
        let f = build_rips_filtration(RipsInput::Points(&far), 0, 2.0).unwrap();
        assert_eq!(f.len(), 2); // scale cap keeps the edge out
    }

    #[test]
    fn rips_unit_square_structure() {
        let f = build_rips_filtration(RipsInput::Points(&unit_square()), 1, 2.0).unwrap();
        f.validate().unwrap();
        let sqrt2 = 2.0f64.sqrt();
        let mut edges: Vec<f64> = f
            .simplices()
            .iter()
            .zip(f.values())
            .filter(|(s, _)| s.dimension() == 1)
            .map(|(_, &v)| v)
            .collect();
        edges.sort_by(f64::total_cmp);
        assert_eq!(edges.len(), 6);
        assert_eq!(&edges[..4], &[1.0, 1.0, 1.0, 1.0]);
        assert!((edges[4] - sqrt2).abs() < 1e-15);
        assert!((edges[5] - sqrt2).abs() < 1e-15);
        let triangles: Vec<f64> = f
            .simplices()
            .iter()
            .zip(f.values())
            .filter(|(s, _)| s.dimension() == 2)
            .map(|(_, &v)| v)
            .collect();
        assert_eq!(triangles.len(), 4);
        assert!(triangles.iter().all(|&v| (v - sqrt2).abs() < 1e-15));
        // maxdimension = 1 keeps the 3-simplex out.
        assert!(f.simplices().iter().all(|s| s.dimension() <= 2));
    }

    #[test]
    fn rips_cloud_equals_induced_matrix() {
        let cloud = unit_square();
        let from_cloud = build_rips_filtration(RipsInput::Points(&cloud), 1, 2.0).unwrap();
        let matrix = cloud.distance_matrix();
        let from_matrix = build_rips_filtration(RipsInput::Distances(&matrix), 1, 2.0).unwrap();
        assert_eq!(from_cloud, from_matrix);
    }

    #[test]
    fn distance_matrix_validation() {
        assert!(DistanceMatrix::new(vec![0.0, 1.0, 2.0, 0.0], 2).is_err()); // asymmetric
        assert!(DistanceMatrix::new(vec![0.5, 1.0, 1.0, 0.0], 2).is_err()); // diagonal
        assert!(DistanceMatrix::new(vec![0.0, -1.0, -1.0, 0.0], 2).is_err()); // negative
        assert!(DistanceMatrix::new(vec![0.0, 1.0, 1.0, 0.0], 2).is_ok());
    }

    #[test]
    fn filtration_dump_format() {
        let cloud = PointCloud::new(&[&[0.0], &[1.0]]).unwrap();
        let f = build_rips_filtration(RipsInput::Points(&cloud), 0, 2.0).unwrap();
        assert_eq!(f.dump(), "0;0\n0;1\n1;0,1\n");
    }
}
