//! Naive double-loop reference implementations of the estimators, with
//! sort-based nearest-neighbor selection. No spatial index, no shared code
//! with the implementations under test.

use tda_core::PointCloud;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn sorted_sq_dists(x: &PointCloud, q: &[f64]) -> Vec<f64> {
    let mut d: Vec<f64> = x.iter().map(|p| sq_dist(p, q)).collect();
    d.sort_by(f64::total_cmp);
    d
}

pub fn naive_dist_fct(x: &PointCloud, queries: &PointCloud) -> Vec<f64> {
    queries
        .iter()
        .map(|q| sorted_sq_dists(x, q)[0].sqrt())
        .collect()
}

pub fn naive_dtm(x: &PointCloud, queries: &PointCloud, m0: f64) -> Vec<f64> {
    let k = ((m0 * x.len() as f64).ceil() as usize).clamp(1, x.len());
    queries
        .iter()
        .map(|q| {
            let d = sorted_sq_dists(x, q);
            (d[..k].iter().sum::<f64>() / k as f64).sqrt()
        })
        .collect()
}

pub fn naive_knn_de(x: &PointCloud, queries: &PointCloud, k: usize) -> Vec<f64> {
    let n = x.len() as f64;
    let d = x.dim();
    let v_d = std::f64::consts::PI.powf(d as f64 / 2.0) / gamma_half_integer(d + 2);
    queries
        .iter()
        .map(|q| {
            let r_k = sorted_sq_dists(x, q)[k - 1].sqrt();
            if r_k == 0.0 {
                f64::INFINITY
            } else {
                k as f64 / (n * v_d * r_k.powi(d as i32))
            }
        })
        .collect()
}

/// Gamma(m / 2) for integer m >= 1, by the recurrence from Gamma(1/2) and
/// Gamma(1) — exact enough for small dimensions and independent of any
/// log-gamma routine.
fn gamma_half_integer(m: usize) -> f64 {
    let mut value = if m.is_multiple_of(2) {
        1.0
    } else {
        std::f64::consts::PI.sqrt()
    };
    let mut arg = if m.is_multiple_of(2) { 2 } else { 1 };
    while arg < m {
        value *= arg as f64 / 2.0;
        arg += 2;
    }
    value
}

pub fn naive_kde(x: &PointCloud, queries: &PointCloud, h: f64) -> Vec<f64> {
    let n = x.len() as f64;
    let d = x.dim() as f64;
    let norm = n * ((2.0 * std::f64::consts::PI).sqrt() * h).powf(d);
    queries
        .iter()
        .map(|q| {
            let mut sum = 0.0;
            for p in x.iter() {
                sum += (-sq_dist(p, q) / (2.0 * h * h)).exp();
            }
            sum / norm
        })
        .collect()
}

pub fn naive_kernel_dist(x: &PointCloud, queries: &PointCloud, h: f64) -> Vec<f64> {
    let n = x.len() as f64;
    let kernel = |a: &[f64], b: &[f64]| (-sq_dist(a, b) / (2.0 * h * h)).exp();
    let mut self_term = 0.0;
    for p in x.iter() {
        for q in x.iter() {
            self_term += kernel(p, q);
        }
    }
    self_term /= n * n;
    queries
        .iter()
        .map(|q| {
            let mut cross = 0.0;
            for p in x.iter() {
                cross += kernel(p, q);
            }
            (self_term + 1.0 - 2.0 * cross / n).max(0.0).sqrt()
        })
        .collect()
}

#[allow(dead_code)]
fn gamma_sanity() {
    // Gamma(1) = 1, Gamma(2) = 1, Gamma(3/2) = sqrt(pi)/2.
    assert!((gamma_half_integer(2) - 1.0).abs() < 1e-15);
    assert!((gamma_half_integer(4) - 1.0).abs() < 1e-15);
    assert!((gamma_half_integer(3) - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
}
