//! Synthetic point-cloud generators used by the CLI and the test suites.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::estimators::PointCloud;
use crate::rng::TdaRng;

/// `n` points uniform on the circle of radius `r` centered at `offset`.
/// The angle of each point is `2 pi u` with `u` drawn from `rng`.
pub fn circle_uniform(
    n: usize,
    r: f64,
    offset: (f64, f64),
    rng: &mut TdaRng,
) -> Result<PointCloud> {
    let mut data = Vec::with_capacity(n * 2);
    for _ in 0..n {
        let angle = 2.0 * std::f64::consts::PI * rng.random::<f64>();
        data.push(offset.0 + r * angle.cos());
        data.push(offset.1 + r * angle.sin());
    }
    PointCloud::from_flat(data, 2)
}

/// `n` points uniform on an axis-aligned box.
pub fn uniform_box(n: usize, limits: &[(f64, f64)], rng: &mut TdaRng) -> Result<PointCloud> {
    let dim = limits.len();
    let mut data = Vec::with_capacity(n * dim);
    for _ in 0..n {
        for &(lo, hi) in limits {
            data.push(lo + (hi - lo) * rng.random::<f64>());
        }
    }
    PointCloud::from_flat(data, dim)
}

/// `n` points from an axis-aligned Gaussian centered at `center` with one
/// standard deviation per coordinate.
pub fn gaussian_cloud(
    n: usize,
    center: &[f64],
    sd: &[f64],
    rng: &mut TdaRng,
) -> Result<PointCloud> {
    let dim = center.len();
    let normals: Vec<Normal<f64>> = center
        .iter()
        .zip(sd)
        .map(|(&c, &s)| Normal::new(c, s).expect("finite mean and positive sd"))
        .collect();
    let mut data = Vec::with_capacity(n * dim);
    for _ in 0..n {
        for normal in &normals {
            data.push(normal.sample(rng));
        }
    }
    PointCloud::from_flat(data, dim)
}

/// Stacks several clouds of equal dimension into one.
pub fn stack(clouds: &[PointCloud]) -> Result<PointCloud> {
    let dim = clouds
        .first()
        .ok_or(crate::Error::EmptyInput { what: "clouds" })?
        .dim();
    let mut data = Vec::new();
    for c in clouds {
        for p in c.iter() {
            data.extend_from_slice(p);
        }
    }
    PointCloud::from_flat(data, dim)
}
