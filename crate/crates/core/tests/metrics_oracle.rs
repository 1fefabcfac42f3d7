//! Metric correctness against exhaustive matching enumeration, plus the
//! metric axioms and ordering properties.

mod common;

use common::matching::{oracle_bottleneck, oracle_wasserstein};
use rand::Rng;
use tda_core::metrics::{bottleneck, wasserstein};
use tda_core::rng::{derive_seed, rng_from_seed};
use tda_core::PersistenceDiagram;

fn random_diagram(rng: &mut tda_core::rng::TdaRng, max_points: usize) -> Vec<(f64, f64)> {
    let n = rng.random_range(0..=max_points);
    (0..n)
        .map(|_| {
            let b = 4.0 * rng.random::<f64>();
            let l = 2.0 * rng.random::<f64>();
            (b, b + l)
        })
        .collect()
}

fn as_diagram(points: &[(f64, f64)]) -> PersistenceDiagram {
    let tuples: Vec<(usize, f64, f64)> = points.iter().map(|&(b, d)| (0, b, d)).collect();
    common::diagram(&tuples)
}

const TOL: f64 = 1e-9;

#[test]
fn matches_exhaustive_enumeration() {
    for trial in 0..100u64 {
        let mut rng = rng_from_seed(derive_seed(0xD15, trial));
        let p1 = random_diagram(&mut rng, 6);
        let p2 = random_diagram(&mut rng, 6);
        let d1 = as_diagram(&p1);
        let d2 = as_diagram(&p2);

        let got_b = bottleneck(&d1, &d2, 0).unwrap();
        let want_b = oracle_bottleneck(&p1, &p2);
        assert!(
            (got_b - want_b).abs() <= TOL,
            "bottleneck {got_b} vs oracle {want_b} (trial {trial})"
        );

        for p in [1.0, 2.0, 3.5] {
            let got_w = wasserstein(&d1, &d2, p, 0).unwrap();
            let want_w = oracle_wasserstein(&p1, &p2, p);
            assert!(
                (got_w - want_w).abs() <= TOL,
                "wasserstein p={p}: {got_w} vs oracle {want_w} (trial {trial})"
            );
        }
    }
}

#[test]
fn symmetry() {
    for trial in 0..100u64 {
        let mut rng = rng_from_seed(derive_seed(0x5E5, trial));
        let d1 = as_diagram(&random_diagram(&mut rng, 8));
        let d2 = as_diagram(&random_diagram(&mut rng, 8));
        let b12 = bottleneck(&d1, &d2, 0).unwrap();
        let b21 = bottleneck(&d2, &d1, 0).unwrap();
        assert!((b12 - b21).abs() <= 1e-12);
        let w12 = wasserstein(&d1, &d2, 2.0, 0).unwrap();
        let w21 = wasserstein(&d2, &d1, 2.0, 0).unwrap();
        assert!((w12 - w21).abs() <= 1e-12, "{w12} vs {w21}");
    }
}

#[test]
fn triangle_inequality() {
    for trial in 0..100u64 {
        let mut rng = rng_from_seed(derive_seed(0x7A1, trial));
        let d1 = as_diagram(&random_diagram(&mut rng, 5));
        let d2 = as_diagram(&random_diagram(&mut rng, 5));
        let d3 = as_diagram(&random_diagram(&mut rng, 5));
        let b12 = bottleneck(&d1, &d2, 0).unwrap();
        let b13 = bottleneck(&d1, &d3, 0).unwrap();
        let b32 = bottleneck(&d3, &d2, 0).unwrap();
        assert!(b12 <= b13 + b32 + TOL);
        for p in [1.0, 2.0] {
            let w12 = wasserstein(&d1, &d2, p, 0).unwrap();
            let w13 = wasserstein(&d1, &d3, p, 0).unwrap();
            let w32 = wasserstein(&d3, &d2, p, 0).unwrap();
            assert!(w12 <= w13 + w32 + TOL);
        }
    }
}

#[test]
fn bottleneck_bounded_by_wasserstein() {
    for trial in 0..100u64 {
        let mut rng = rng_from_seed(derive_seed(0xB0E, trial));
        let d1 = as_diagram(&random_diagram(&mut rng, 6));
        let d2 = as_diagram(&random_diagram(&mut rng, 6));
        let b = bottleneck(&d1, &d2, 0).unwrap();
        for p in [1.0, 2.0, 4.0] {
            let w = wasserstein(&d1, &d2, p, 0).unwrap();
            assert!(b <= w + TOL, "b = {b}, W_{p} = {w}");
        }
    }
}

#[test]
fn scaling_by_powers_of_two_is_exact() {
    for trial in 0..40u64 {
        let mut rng = rng_from_seed(derive_seed(0x5CA, trial));
        let p1 = random_diagram(&mut rng, 5);
        let p2 = random_diagram(&mut rng, 5);
        let scale = |pts: &[(f64, f64)], c: f64| -> Vec<(f64, f64)> {
            pts.iter().map(|&(b, d)| (c * b, c * d)).collect()
        };
        for c in [0.5, 2.0, 4.0] {
            let b1 = bottleneck(&as_diagram(&p1), &as_diagram(&p2), 0).unwrap();
            let b2 =
                bottleneck(&as_diagram(&scale(&p1, c)), &as_diagram(&scale(&p2, c)), 0).unwrap();
            assert_eq!(c * b1, b2);
            let w1 = wasserstein(&as_diagram(&p1), &as_diagram(&p2), 2.0, 0).unwrap();
            let w2 = wasserstein(
                &as_diagram(&scale(&p1, c)),
                &as_diagram(&scale(&p2, c)),
                2.0,
                0,
            )
            .unwrap();
            assert!((c * w1 - w2).abs() <= 1e-12 * (1.0 + w2));
        }
    }
}
