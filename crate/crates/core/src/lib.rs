//! Topological summaries of point-cloud data.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`estimators`] — distance functions and density estimators evaluated
//!   over a rectilinear grid (or any set of query points);
//! * [`filtration`] — ordered simplicial filtrations built either from a
//!   scalar field on a grid (lower-star over a Freudenthal triangulation)
//!   or from a point cloud / distance matrix (Vietoris–Rips);
//! * [`persistence`] — boundary-matrix reduction over GF(2) and the two
//!   top-level entry points [`persistence::grid_diag`] and
//!   [`persistence::rips_diag`];
//! * [`metrics`] — bottleneck and p-Wasserstein distances between diagrams;
//! * [`summaries`] — persistence landscapes and power-weighted silhouettes;
//! * [`statistics`] — bootstrap confidence bands, multiplier-bootstrap bands
//!   for mean summary curves, and max-persistence parameter selection;
//! * [`clustering`] — density cluster trees (λ/α/κ coordinates) over a
//!   k-nearest-neighbor graph.
//!
//! Everything stochastic takes an explicit `u64` seed and is bit-for-bit
//! reproducible; see [`rng`].
//!
//! ```
//! use tda_core::filtration::RipsInput;
//! use tda_core::{persistence, PointCloud};
//!
//! // The four corners of the unit square carry one loop, born when the
//! // sides appear and filled at the diagonal scale.
//! let corners = PointCloud::new(&[
//!     &[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0],
//! ])?;
//! let diagram = persistence::rips_diag(RipsInput::Points(&corners), 1, 2.0)?;
//! let loops = diagram.restrict(1);
//! assert_eq!(loops.len(), 1);
//! assert_eq!(loops[0].birth, 1.0);
//! assert!((loops[0].death - 2.0_f64.sqrt()).abs() < 1e-12);
//! # Ok::<(), tda_core::Error>(())
//! ```

pub mod clustering;
pub mod error;
pub mod estimators;
pub mod filtration;
pub mod io;
pub mod metrics;
pub mod persistence;
pub mod rng;
pub mod sample;
pub mod statistics;
pub mod summaries;

pub use error::{Error, Result};
pub use estimators::{Estimator, EvaluationGrid, PointCloud, ScalarField};
pub use filtration::{DistanceMatrix, Filtration, Simplex};
pub use persistence::{DiagramPoint, Orientation, PersistenceDiagram};
