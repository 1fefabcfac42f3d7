//! Persistence landscapes and power-weighted silhouettes evaluated on a
//! one-dimensional grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::PersistenceDiagram;

/// A function sampled on a strictly increasing grid `tseq`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryCurve {
    pub tseq: Vec<f64>,
    pub values: Vec<f64>,
    /// Set when the diagram had no pairs in the requested dimension; the
    /// curve is then identically zero.
    pub no_features: bool,
}

impl SummaryCurve {
    fn new(tseq: &[f64], values: Vec<f64>, no_features: bool) -> Result<Self> {
        if tseq.is_empty() {
            return Err(Error::EmptyInput { what: "tseq" });
        }
        if !tseq.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid_parameter(
                "tseq",
                "must be strictly increasing",
            ));
        }
        Ok(SummaryCurve {
            tseq: tseq.to_vec(),
            values,
            no_features,
        })
    }
}

/// Evenly spaced domain samples, the usual way to build a `tseq`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || lo >= hi || lo.is_nan() || hi.is_nan() {
        return Err(Error::invalid_parameter(
            "tseq",
            "need lo < hi and at least two samples",
        ));
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

/// The tent function of a birth-death pair: `t - b` on `[b, (b+d)/2]`,
/// `d - t` on `((b+d)/2, d]`, zero elsewhere.
pub fn triangle(b: f64, d: f64, t: f64) -> Result<f64> {
    if b > d {
        return Err(Error::invalid_parameter("b", "tent requires b <= d"));
    }
    Ok(tent(b, d, t))
}

fn tent(b: f64, d: f64, t: f64) -> f64 {
    let mid = 0.5 * (b + d);
    if t < b || t > d {
        0.0
    } else if t <= mid {
        t - b
    } else {
        d - t
    }
}

/// Birth-death intervals of the dimension-restricted diagram, mirrored to
/// `(min, max)` so superlevel pairs tent the right way. Essential pairs come
/// capped at the diagram's scale cap and may be excluded.
fn intervals(
    diagram: &PersistenceDiagram,
    dimension: usize,
    include_essential: bool,
) -> Vec<(f64, f64)> {
    diagram
        .restrict(dimension)
        .into_iter()
        .filter(|p| include_essential || !p.essential)
        .map(|p| (p.birth.min(p.death), p.birth.max(p.death)))
        .collect()
}

/// The `k`-th landscape function: at each `t`, the `k`-th largest tent value
/// over the dimension-restricted pairs, or zero when fewer than `k` pairs
/// exist.
pub fn landscape(
    diagram: &PersistenceDiagram,
    dimension: usize,
    k: usize,
    tseq: &[f64],
    include_essential: bool,
) -> Result<SummaryCurve> {
    if k < 1 {
        return Err(Error::invalid_parameter("k", "must be >= 1"));
    }
    let pairs = intervals(diagram, dimension, include_essential);
    if pairs.len() < k {
        return SummaryCurve::new(tseq, vec![0.0; tseq.len()], pairs.is_empty());
    }
    let mut heights = vec![0.0; pairs.len()];
    let values = tseq
        .iter()
        .map(|&t| {
            for (slot, &(b, d)) in heights.iter_mut().zip(&pairs) {
                *slot = tent(b, d, t);
            }
            // k-th largest via partial selection.
            let (_, kth, _) = heights.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
            *kth
        })
        .collect();
    SummaryCurve::new(tseq, values, false)
}

/// The power-weighted silhouette: the average of the tents weighted by
/// `|d - b|^p`. A diagram with no pairs in the dimension yields the zero
/// curve with `no_features` set.
pub fn silhouette(
    diagram: &PersistenceDiagram,
    p: f64,
    dimension: usize,
    tseq: &[f64],
    include_essential: bool,
) -> Result<SummaryCurve> {
    if p <= 0.0 || !p.is_finite() {
        return Err(Error::invalid_parameter("p", "must be a positive real"));
    }
    let pairs = intervals(diagram, dimension, include_essential);
    let weights: Vec<f64> = pairs.iter().map(|&(b, d)| (d - b).abs().powf(p)).collect();
    let weight_sum: f64 = weights.iter().sum();
    if pairs.is_empty() || weight_sum == 0.0 {
        return SummaryCurve::new(tseq, vec![0.0; tseq.len()], true);
    }
    let values = tseq
        .iter()
        .map(|&t| {
            let weighted: f64 = pairs
                .iter()
                .zip(&weights)
                .map(|(&(b, d), &w)| w * tent(b, d, t))
                .sum();
            weighted / weight_sum
        })
        .collect();
    SummaryCurve::new(tseq, values, false)
}
