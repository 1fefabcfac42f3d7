//! Shared independent oracles for the integration and acceptance suites.
//!
//! Nothing here touches the reduction code under test: persistent Betti
//! numbers come from dense Gaussian elimination over GF(2), diagram metrics
//! from exhaustive matching enumeration, and the estimator references from
//! naive double loops.
//!
//! Each integration test target compiles this module separately and uses a
//! subset of it.
#![allow(dead_code)]

pub mod estimators_naive;
pub mod matching;
pub mod pbetti;

use tda_core::{DiagramPoint, Orientation, PersistenceDiagram};

/// Builds a sublevel diagram from raw tuples (dimension, birth, death).
pub fn diagram(points: &[(usize, f64, f64)]) -> PersistenceDiagram {
    let pts = points
        .iter()
        .map(|&(dimension, birth, death)| DiagramPoint {
            dimension,
            birth,
            death,
            essential: false,
        })
        .collect();
    PersistenceDiagram::new(Orientation::Sublevel, f64::MAX, pts).unwrap()
}

/// Canonical comparable form of a diagram: sorted (dim, birth, death,
/// essential) tuples.
pub fn canonical(d: &PersistenceDiagram) -> Vec<(usize, f64, f64, bool)> {
    let mut v: Vec<(usize, f64, f64, bool)> = d
        .points()
        .iter()
        .map(|p| (p.dimension, p.birth, p.death, p.essential))
        .collect();
    v.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });
    v
}
