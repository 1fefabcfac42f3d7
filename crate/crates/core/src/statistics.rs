//! The statistical layer: bootstrap confidence bands for estimators,
//! multiplier-bootstrap bands for mean summary curves, and max-persistence
//! smoothing-parameter selection.
//!
//! All replicate statistics use the same empirical quantile rule: `q_alpha`
//! is the `ceil((1 - alpha) B)`-th order statistic of the replicate sup-norm
//! statistics, which realizes the infimum definition of the upper quantile
//! for an empirical distribution. Replicates are independent streams derived
//! from the master seed and combine in replicate-index order, so concurrency
//! never changes the output.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{Estimator, EvaluationGrid, PointCloud};
use crate::persistence::{grid_diag_with_field, DiagramPoint, PersistenceDiagram};
use crate::rng::{derive_seed, rng_from_seed};

/// A symmetric sup-norm confidence band around a center estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBand {
    /// Half-width `q_alpha / sqrt(n)`.
    pub width: f64,
    pub center: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub alpha: f64,
    pub replicates: usize,
    pub seed: u64,
}

/// Bootstrap confidence band for an estimator evaluated over a grid:
/// resample `x` with replacement `b` times, measure the scaled sup-norm
/// deviation of each replicate estimate from the center estimate, and take
/// the empirical quantile.
pub fn bootstrap_band(
    x: &PointCloud,
    estimator: Estimator,
    grid: &EvaluationGrid,
    b: usize,
    alpha: f64,
    seed: u64,
) -> Result<ConfidenceBand> {
    let queries = grid.to_point_cloud();
    bootstrap_band_at(x, estimator, &queries, b, alpha, seed)
}

/// As [`bootstrap_band`], evaluated at an explicit query cloud.
pub fn bootstrap_band_at(
    x: &PointCloud,
    estimator: Estimator,
    queries: &PointCloud,
    b: usize,
    alpha: f64,
    seed: u64,
) -> Result<ConfidenceBand> {
    check_band_params(b, alpha)?;
    let n = x.len();
    let sqrt_n = (n as f64).sqrt();
    let center = estimator.evaluate(x, queries)?;

    let thetas: Vec<f64> = (0..b)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let mut rng = rng_from_seed(derive_seed(seed, j as u64));
            let mut data = Vec::with_capacity(n * x.dim());
            for _ in 0..n {
                let idx = rng.random_range(0..n);
                data.extend_from_slice(x.point(idx));
            }
            let resampled = PointCloud::from_flat(data, x.dim())?;
            let estimate = estimator.evaluate(&resampled, queries)?;
            let sup = estimate
                .iter()
                .zip(&center)
                .map(|(a, c)| (a - c).abs())
                .fold(0.0, f64::max);
            Ok(sqrt_n * sup)
        })
        .collect::<Result<Vec<f64>>>()?;

    let width = empirical_sup_quantile(&thetas, alpha) / sqrt_n;
    Ok(ConfidenceBand {
        width,
        lower: center.iter().map(|c| c - width).collect(),
        upper: center.iter().map(|c| c + width).collect(),
        center,
        alpha,
        replicates: b,
        seed,
    })
}

fn check_band_params(b: usize, alpha: f64) -> Result<()> {
    if b < 1 {
        return Err(Error::invalid_parameter("B", "must be >= 1"));
    }
    if alpha.is_nan() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::invalid_parameter("alpha", "must lie in (0, 1)"));
    }
    Ok(())
}

/// `inf { q : (1/B) sum I(theta_j >= q) <= alpha }` realized on the empirical
/// distribution as the `ceil((1 - alpha) B)`-th order statistic (ascending,
/// 1-indexed).
pub fn empirical_sup_quantile(thetas: &[f64], alpha: f64) -> f64 {
    let b = thetas.len();
    let mut sorted = thetas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = (((1.0 - alpha) * b as f64).ceil() as usize).clamp(1, b);
    sorted[rank - 1]
}

/// Splits diagram points into significant features and noise: a pair is
/// significant iff its lifetime strictly exceeds `2 * width`.
pub fn significant_features(
    diagram: &PersistenceDiagram,
    width: f64,
) -> Result<(Vec<DiagramPoint>, Vec<DiagramPoint>)> {
    if width.is_nan() || width < 0.0 {
        return Err(Error::invalid_parameter("width", "must be >= 0"));
    }
    Ok(diagram
        .points()
        .iter()
        .partition(|p| p.lifetime() > 2.0 * width))
}

/// Mean summary curve with a multiplier-bootstrap confidence band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierBand {
    pub mean: Vec<f64>,
    pub width: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub alpha: f64,
    pub replicates: usize,
    pub seed: u64,
}

/// Multiplier bootstrap for the mean of `n` summary curves sampled on a
/// common grid. Each replicate perturbs the centered curves with independent
/// standard-normal multipliers and takes the scaled sup-norm.
pub fn multip_bootstrap(
    curves: &[Vec<f64>],
    b: usize,
    alpha: f64,
    seed: u64,
) -> Result<MultiplierBand> {
    check_band_params(b, alpha)?;
    let n = curves.len();
    if n < 2 {
        return Err(Error::invalid_parameter("curves", "need at least 2 curves"));
    }
    let t = curves[0].len();
    if curves.iter().any(|c| c.len() != t) {
        return Err(Error::invalid_parameter(
            "curves",
            "curves have inconsistent lengths",
        ));
    }
    let mean: Vec<f64> = (0..t)
        .map(|j| curves.iter().map(|c| c[j]).sum::<f64>() / n as f64)
        .collect();
    let centered: Vec<Vec<f64>> = curves
        .iter()
        .map(|c| c.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect();
    let sqrt_n = (n as f64).sqrt();

    let thetas: Vec<f64> = (0..b)
        .into_par_iter()
        .map(|j| {
            let mut rng = rng_from_seed(derive_seed(seed, j as u64));
            let xi: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let mut sup = 0.0f64;
            for col in 0..t {
                let s: f64 = centered.iter().zip(&xi).map(|(c, &x)| x * c[col]).sum();
                sup = sup.max(s.abs());
            }
            sup / sqrt_n
        })
        .collect();

    let width = empirical_sup_quantile(&thetas, alpha) / sqrt_n;
    Ok(MultiplierBand {
        lower: mean.iter().map(|m| m - width).collect(),
        upper: mean.iter().map(|m| m + width).collect(),
        mean,
        width,
        alpha,
        replicates: b,
        seed,
    })
}

/// Diagram, band width and significance summaries for one smoothing
/// parameter of a max-persistence scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterPersistence {
    pub parameter: f64,
    pub diagram: PersistenceDiagram,
    /// Band half-width `q_alpha / sqrt(n)` at this parameter.
    pub band_width: f64,
    /// Number of features with lifetime strictly above `2 * band_width`.
    pub num_significant: usize,
    /// Total significant persistence: the sum of `(lifetime - 2 width)_+`.
    pub total_significant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxPersistenceResult {
    pub per_parameter: Vec<ParameterPersistence>,
    /// Parameters maximizing the significant-feature count (ties kept).
    pub argmax_count: Vec<f64>,
    /// Parameters maximizing the total significant persistence (ties kept).
    pub argmax_total: Vec<f64>,
    pub alpha: f64,
    pub replicates: usize,
    pub seed: u64,
}

/// Runs `grid_diag` plus `bootstrap_band` for every candidate smoothing
/// parameter and scores each by the number of significant features and the
/// total significant persistence.
#[allow(clippy::too_many_arguments)]
pub fn max_persistence(
    base: Estimator,
    parameters: &[f64],
    x: &PointCloud,
    limits: &[(f64, f64)],
    by: f64,
    sublevel: bool,
    b: usize,
    alpha: f64,
    seed: u64,
) -> Result<MaxPersistenceResult> {
    if parameters.is_empty() {
        return Err(Error::EmptyInput { what: "parameters" });
    }
    check_band_params(b, alpha)?;
    let grid = EvaluationGrid::new(limits, by)?;
    let queries = grid.to_point_cloud();
    let per_parameter: Vec<ParameterPersistence> = parameters
        .iter()
        .enumerate()
        .map(|(idx, &param)| -> Result<ParameterPersistence> {
            let estimator = base.with_parameter(param)?;
            let (diagram, _) = grid_diag_with_field(x, estimator, limits, by, sublevel)?;
            let band = bootstrap_band_at(
                x,
                estimator,
                &queries,
                b,
                alpha,
                derive_seed(seed, idx as u64),
            )?;
            let threshold = 2.0 * band.width;
            let num_significant = diagram
                .points()
                .iter()
                .filter(|p| p.lifetime() > threshold)
                .count();
            let total_significant = diagram
                .points()
                .iter()
                .map(|p| (p.lifetime() - threshold).max(0.0))
                .sum();
            Ok(ParameterPersistence {
                parameter: param,
                diagram,
                band_width: band.width,
                num_significant,
                total_significant,
            })
        })
        .collect::<Result<_>>()?;

    let best_count = per_parameter
        .iter()
        .map(|p| p.num_significant)
        .max()
        .unwrap_or(0);
    let argmax_count = per_parameter
        .iter()
        .filter(|p| p.num_significant == best_count)
        .map(|p| p.parameter)
        .collect();
    let best_total = per_parameter
        .iter()
        .map(|p| p.total_significant)
        .fold(f64::NEG_INFINITY, f64::max);
    let argmax_total = per_parameter
        .iter()
        .filter(|p| p.total_significant == best_total)
        .map(|p| p.parameter)
        .collect();
    Ok(MaxPersistenceResult {
        per_parameter,
        argmax_count,
        argmax_total,
        alpha,
        replicates: b,
        seed,
    })
}
