//! Distance functions and density estimators over query points.
//!
//! The five estimators all share the same shape: given a sample cloud `X`
//! and a list of query points (typically the nodes of an [`EvaluationGrid`]),
//! produce one real value per query. They are pure functions of their inputs;
//! query evaluation is partitioned across worker threads with results written
//! to disjoint output slots, so the output never depends on thread count.

mod kdtree;

use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

pub(crate) use kdtree::NearestNeighbors;

/// `n` observations in `d`-dimensional Euclidean space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    data: Vec<f64>,
    dim: usize,
}

impl PointCloud {
    /// Builds a cloud from one coordinate slice per point.
    ///
    /// Fails on an empty set, ragged dimensions, or non-finite coordinates.
    pub fn new<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput {
            what: "point cloud",
        })?;
        let dim = first.as_ref().len();
        let mut data = Vec::with_capacity(points.len() * dim);
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            data.extend_from_slice(p);
        }
        Self::from_flat(data, dim)
    }

    /// Builds a cloud from a flat row-major buffer.
    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid_parameter("dim", "must be >= 1"));
        }
        if data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(Error::EmptyInput {
                what: "point cloud",
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "point coordinates",
            });
        }
        Ok(PointCloud { data, dim })
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees n >= 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Euclidean distance matrix induced by the cloud.
    pub fn distance_matrix(&self) -> crate::filtration::DistanceMatrix {
        let n = self.len();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(self.point(i), self.point(j));
                m[i * n + j] = d;
                m[j * n + i] = d;
            }
        }
        crate::filtration::DistanceMatrix::new(m, n).expect("induced matrix is valid")
    }
}

pub(crate) fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// A rectilinear evaluation grid: per-axis limits `(lo, hi)` and a common
/// step `by`. Axis `k` carries `floor((hi_k - lo_k) / by) + 1` samples
/// `lo, lo + by, lo + 2 by, ...`; flattened query points are enumerated in
/// row-major order with the FIRST axis varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationGrid {
    limits: Vec<(f64, f64)>,
    by: f64,
    axes: Vec<Vec<f64>>,
}

impl EvaluationGrid {
    /// Grid constructor (`make_grid` in operation terms).
    pub fn new(limits: &[(f64, f64)], by: f64) -> Result<Self> {
        if limits.is_empty() {
            return Err(Error::EmptyInput {
                what: "grid limits",
            });
        }
        if by <= 0.0 || !by.is_finite() {
            return Err(Error::invalid_parameter("by", "must be a positive real"));
        }
        let mut axes = Vec::with_capacity(limits.len());
        for &(lo, hi) in limits {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::NonFinite {
                    what: "grid limits",
                });
            }
            if lo >= hi {
                return Err(Error::invalid_parameter(
                    "lim",
                    format!("inverted or degenerate axis limits ({lo}, {hi})"),
                ));
            }
            if by > hi - lo {
                return Err(Error::invalid_parameter(
                    "by",
                    format!("step {by} exceeds axis extent {}", hi - lo),
                ));
            }
            // Fuzz before flooring so decimal steps that divide the extent
            // exactly are not lost to rounding (7 / 0.2 evaluates just
            // below 35 in binary).
            let count = ((hi - lo) / by + 1e-10).floor() as usize + 1;
            axes.push((0..count).map(|i| lo + i as f64 * by).collect());
        }
        Ok(EvaluationGrid {
            limits: limits.to_vec(),
            by,
            axes,
        })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn by(&self) -> f64 {
        self.by
    }

    pub fn limits(&self) -> &[(f64, f64)] {
        &self.limits
    }

    /// Sample values along axis `k`.
    pub fn axis(&self, k: usize) -> &[f64] {
        &self.axes[k]
    }

    pub fn axis_lens(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    /// Total number of query points (product of axis lengths).
    pub fn num_points(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    /// Coordinates of the flattened query point `index` (first axis fastest).
    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut rem = index;
        self.axes
            .iter()
            .map(|axis| {
                let i = rem % axis.len();
                rem /= axis.len();
                axis[i]
            })
            .collect()
    }

    /// All query points as a cloud, in flattened order.
    pub fn to_point_cloud(&self) -> PointCloud {
        let dim = self.dim();
        let mut data = Vec::with_capacity(self.num_points() * dim);
        for i in 0..self.num_points() {
            data.extend(self.point(i));
        }
        PointCloud::from_flat(data, dim).expect("grid has >= 2 samples per axis")
    }
}

/// Function values evaluated on an [`EvaluationGrid`], one per grid point in
/// the grid's flattened order.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: EvaluationGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: EvaluationGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.num_points() {
            return Err(Error::invalid_parameter(
                "values",
                format!(
                    "length {} does not match grid point count {}",
                    values.len(),
                    grid.num_points()
                ),
            ));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "scalar field values",
            });
        }
        Ok(ScalarField { grid, values })
    }

    pub fn grid(&self) -> &EvaluationGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Identifier plus parameters for one of the five estimators, used where a
/// function has to be passed around (grid diagrams, bootstrap bands,
/// max-persistence scans).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fn", rename_all = "snake_case")]
pub enum Estimator {
    /// Euclidean distance to the nearest sample point.
    Distance,
    /// Distance to the empirical measure with smoothing mass `m0`.
    Dtm { m0: f64 },
    /// k-nearest-neighbor density estimate.
    Knn { k: usize },
    /// Gaussian kernel density estimate with bandwidth `h`.
    Kde { h: f64 },
    /// Gaussian kernel distance with bandwidth `h`.
    KernelDist { h: f64 },
}

impl Estimator {
    /// Evaluates the estimator at every query point.
    pub fn evaluate(&self, x: &PointCloud, queries: &PointCloud) -> Result<Vec<f64>> {
        match *self {
            Estimator::Distance => dist_fct(x, queries),
            Estimator::Dtm { m0 } => dtm(x, queries, m0),
            Estimator::Knn { k } => knn_de(x, queries, k),
            Estimator::Kde { h } => kde(x, queries, h),
            Estimator::KernelDist { h } => kernel_dist(x, queries, h),
        }
    }

    /// The smoothing parameter this estimator varies in a max-persistence
    /// scan, if any.
    pub fn with_parameter(&self, value: f64) -> Result<Estimator> {
        match self {
            Estimator::Distance => Err(Error::invalid_parameter(
                "parameter",
                "the distance function has no smoothing parameter",
            )),
            Estimator::Dtm { .. } => Ok(Estimator::Dtm { m0: value }),
            Estimator::Knn { .. } => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::invalid_parameter(
                        "k",
                        "knn parameter must be a positive integer",
                    ));
                }
                Ok(Estimator::Knn { k: value as usize })
            }
            Estimator::Kde { .. } => Ok(Estimator::Kde { h: value }),
            Estimator::KernelDist { .. } => Ok(Estimator::KernelDist { h: value }),
        }
    }
}

fn check_dims(x: &PointCloud, queries: &PointCloud) -> Result<()> {
    if x.dim() != queries.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: queries.dim(),
        });
    }
    Ok(())
}

/// Distance function: Euclidean distance from each query to its nearest
/// sample point.
pub fn dist_fct(x: &PointCloud, queries: &PointCloud) -> Result<Vec<f64>> {
    check_dims(x, queries)?;
    let nn = NearestNeighbors::build(x);
    Ok(par_map_queries(queries, |q| nn.knn(q, 1)[0].0.sqrt()))
}

/// Distance to the empirical measure: root mean squared distance to the
/// `k = ceil(m0 n)` nearest samples.
pub fn dtm(x: &PointCloud, queries: &PointCloud, m0: f64) -> Result<Vec<f64>> {
    check_dims(x, queries)?;
    if !(m0 > 0.0 && m0 <= 1.0) {
        return Err(Error::invalid_parameter("m0", "must lie in (0, 1]"));
    }
    let k = ((m0 * x.len() as f64).ceil() as usize).clamp(1, x.len());
    let nn = NearestNeighbors::build(x);
    Ok(par_map_queries(queries, |q| {
        let neighbors = nn.knn(q, k);
        let sum_sq: f64 = neighbors.iter().map(|&(d2, _)| d2).sum();
        (sum_sq / k as f64).sqrt()
    }))
}

/// Volume of the d-dimensional Euclidean unit ball, via log-gamma so large
/// dimensions do not overflow.
pub fn unit_ball_volume(d: usize) -> f64 {
    let d = d as f64;
    (0.5 * d * std::f64::consts::PI.ln() - ln_gamma(0.5 * d + 1.0)).exp()
}

/// k-nearest-neighbor density estimate. A query sitting on at least `k`
/// coincident samples has `r_k = 0` and evaluates to `+inf`.
pub fn knn_de(x: &PointCloud, queries: &PointCloud, k: usize) -> Result<Vec<f64>> {
    check_dims(x, queries)?;
    if k < 1 || k > x.len() {
        return Err(Error::invalid_parameter(
            "k",
            format!("must satisfy 1 <= k <= n = {}", x.len()),
        ));
    }
    let n = x.len() as f64;
    let d = x.dim();
    let v_d = unit_ball_volume(d);
    let nn = NearestNeighbors::build(x);
    Ok(par_map_queries(queries, |q| {
        let r_k = nn.knn(q, k).last().unwrap().0.sqrt();
        if r_k == 0.0 {
            f64::INFINITY
        } else {
            k as f64 / (n * v_d * r_k.powi(d as i32))
        }
    }))
}

/// Gaussian kernel density estimate with bandwidth `h`.
pub fn kde(x: &PointCloud, queries: &PointCloud, h: f64) -> Result<Vec<f64>> {
    check_dims(x, queries)?;
    check_bandwidth(h)?;
    let n = x.len() as f64;
    let d = x.dim() as i32;
    let norm = n * ((2.0 * std::f64::consts::PI).sqrt() * h).powi(d);
    let inv_two_h2 = 1.0 / (2.0 * h * h);
    Ok(par_map_queries(queries, |q| {
        let sum: f64 = x
            .iter()
            .map(|p| (-squared_euclidean(p, q) * inv_two_h2).exp())
            .sum();
        sum / norm
    }))
}

/// Gaussian kernel distance with bandwidth `h`.
pub fn kernel_dist(x: &PointCloud, queries: &PointCloud, h: f64) -> Result<Vec<f64>> {
    check_dims(x, queries)?;
    check_bandwidth(h)?;
    let n = x.len() as f64;
    let inv_two_h2 = 1.0 / (2.0 * h * h);
    // Sample-sample term is query independent.
    let mut self_term = 0.0;
    for p in x.iter() {
        for q in x.iter() {
            self_term += (-squared_euclidean(p, q) * inv_two_h2).exp();
        }
    }
    self_term /= n * n;
    Ok(par_map_queries(queries, |q| {
        let cross: f64 = x
            .iter()
            .map(|p| (-squared_euclidean(p, q) * inv_two_h2).exp())
            .sum::<f64>()
            / n;
        // K_h(y, y) = 1; clamp tiny negative round-off before the root.
        (self_term + 1.0 - 2.0 * cross).max(0.0).sqrt()
    }))
}

fn check_bandwidth(h: f64) -> Result<()> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::invalid_parameter("h", "must be a positive real"));
    }
    Ok(())
}

fn par_map_queries<F>(queries: &PointCloud, f: F) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    (0..queries.len())
        .into_par_iter()
        .map(|i| f(queries.point(i)))
        .collect()
}
