//! Persistence pairs from boundary-matrix reduction over the two-element
//! field, and the two top-level pipelines `grid_diag` and `rips_diag`.
//!
//! Columns are stored as sorted index lists and added by merge. Two
//! reduction strategies are implemented and cross-checked in tests: the
//! standard left-to-right algorithm, and the twist variant that processes
//! dimensions in decreasing order and clears the column of every recorded
//! birth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{Estimator, EvaluationGrid, PointCloud, ScalarField};
use crate::filtration::{build_grid_filtration, build_rips_filtration, Filtration, RipsInput};

/// Whether a diagram describes sublevel sets (births before deaths) or
/// superlevel sets (features born at high values die at lower values).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Sublevel,
    Superlevel,
}

/// One birth-death pair. `essential` marks classes still alive at the end of
/// the filtration, whose death is capped at the diagram's `scale_cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub dimension: usize,
    pub birth: f64,
    pub death: f64,
    pub essential: bool,
}

impl DiagramPoint {
    pub fn lifetime(&self) -> f64 {
        (self.death - self.birth).abs()
    }
}

/// A multiset of birth-death pairs plus the orientation and the cap used to
/// close unpaired features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    orientation: Orientation,
    scale_cap: f64,
    points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn new(
        orientation: Orientation,
        scale_cap: f64,
        mut points: Vec<DiagramPoint>,
    ) -> Result<Self> {
        for p in &points {
            if !p.birth.is_finite() || !p.death.is_finite() {
                return Err(Error::NonFinite {
                    what: "diagram values",
                });
            }
            let ordered = match orientation {
                Orientation::Sublevel => p.birth <= p.death,
                Orientation::Superlevel => p.birth >= p.death,
            };
            if !ordered {
                return Err(Error::invalid_parameter(
                    "points",
                    "pair violates the diagram orientation",
                ));
            }
        }
        sort_points(&mut points);
        Ok(PersistenceDiagram {
            orientation,
            scale_cap,
            points,
        })
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn scale_cap(&self) -> f64 {
        self.scale_cap
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points of one homological dimension.
    pub fn restrict(&self, dimension: usize) -> Vec<DiagramPoint> {
        self.points
            .iter()
            .copied()
            .filter(|p| p.dimension == dimension)
            .collect()
    }

    pub fn max_dimension(&self) -> Option<usize> {
        self.points.iter().map(|p| p.dimension).max()
    }
}

fn sort_points(points: &mut [DiagramPoint]) {
    points.sort_by(|a, b| {
        a.dimension
            .cmp(&b.dimension)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
            .then(a.essential.cmp(&b.essential))
    });
}

/// Output of boundary-matrix reduction: paired (birth simplex, death simplex)
/// filtration indices plus the unpaired (essential) birth indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, usize)>,
    pub essential: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionStrategy {
    Standard,
    TwistClearing,
}

/// Reduces the mod-2 boundary matrix of `filtration` with the twist strategy.
/// Rejects filtrations that violate monotonicity or face closure.
pub fn reduce_boundary_matrix(filtration: &Filtration) -> Result<Pairing> {
    reduce_with_strategy(filtration, ReductionStrategy::TwistClearing)
}

pub fn reduce_with_strategy(
    filtration: &Filtration,
    strategy: ReductionStrategy,
) -> Result<Pairing> {
    filtration.validate()?;
    let mut columns = boundary_columns(filtration);
    let m = columns.len();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; m];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut scratch: Vec<u32> = Vec::new();

    let order: Vec<usize> = match strategy {
        ReductionStrategy::Standard => (0..m).collect(),
        ReductionStrategy::TwistClearing => {
            // Dimensions in decreasing order, filtration order within each.
            let max_dim = filtration.max_dimension();
            let mut order = Vec::with_capacity(m);
            for dim in (0..=max_dim).rev() {
                order.extend((0..m).filter(|&j| filtration.simplex(j).dimension() == dim));
            }
            order
        }
    };

    for j in order {
        while let Some(&low) = columns[j].last() {
            match pivot_of_row[low as usize] {
                None => {
                    pivot_of_row[low as usize] = Some(j);
                    pairs.push((low as usize, j));
                    if strategy == ReductionStrategy::TwistClearing {
                        // The pivot row is a birth column: it reduces to a
                        // cycle, so skip the work entirely.
                        columns[low as usize].clear();
                    }
                    break;
                }
                Some(k) => add_columns(&mut columns, j, k, &mut scratch),
            }
        }
    }

    // Birth columns reduce to zero (cleared columns included); essential
    // classes are the zero columns never killed by a later death column.
    let mut is_birth = vec![false; m];
    for &(b, _) in &pairs {
        is_birth[b] = true;
    }
    let essential: Vec<usize> = (0..m)
        .filter(|&j| columns[j].is_empty() && !is_birth[j])
        .collect();
    pairs.sort_unstable();
    Ok(Pairing { pairs, essential })
}

fn boundary_columns(filtration: &Filtration) -> Vec<Vec<u32>> {
    let index = filtration.index_map();
    (0..filtration.len())
        .map(|j| {
            let mut col: Vec<u32> = filtration
                .simplex(j)
                .facets()
                .map(|f| index[f.vertices()] as u32)
                .collect();
            col.sort_unstable();
            col
        })
        .collect()
}

/// `columns[j] ^= columns[k]` (symmetric difference of sorted index lists).
fn add_columns(columns: &mut [Vec<u32>], j: usize, k: usize, scratch: &mut Vec<u32>) {
    scratch.clear();
    let (a, b) = (&columns[j], &columns[k]);
    let (mut ia, mut ib) = (0, 0);
    while ia < a.len() && ib < b.len() {
        match a[ia].cmp(&b[ib]) {
            std::cmp::Ordering::Less => {
                scratch.push(a[ia]);
                ia += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(b[ib]);
                ib += 1;
            }
            std::cmp::Ordering::Equal => {
                ia += 1;
                ib += 1;
            }
        }
    }
    scratch.extend_from_slice(&a[ia..]);
    scratch.extend_from_slice(&b[ib..]);
    std::mem::swap(&mut columns[j], scratch);
}

/// Turns a pairing into a diagram on the published value scale.
///
/// Finite pairs take the filtration values of their simplices; unpaired
/// classes are closed at `scale_cap` and flagged essential. Finite pairs with
/// zero persistence are dropped; essential classes are kept even when the
/// birth touches the cap, since they still witness a feature. Superlevel
/// diagrams are re-negated so published values live on the original scale.
/// Classes above `max_dimension` (artifacts of the construction bound) are
/// discarded.
pub fn extract_diagram(
    pairing: &Pairing,
    filtration: &Filtration,
    orientation: Orientation,
    scale_cap: f64,
    max_dimension: Option<usize>,
) -> Result<PersistenceDiagram> {
    let sign = match orientation {
        Orientation::Sublevel => 1.0,
        Orientation::Superlevel => -1.0,
    };
    let internal_cap = sign * scale_cap;
    let keep = |dim: usize| max_dimension.is_none_or(|m| dim <= m);
    let mut points = Vec::new();
    for &(b, d) in &pairing.pairs {
        let birth = filtration.value(b);
        let death = filtration.value(d);
        let dim = filtration.simplex(b).dimension();
        if birth != death && keep(dim) {
            points.push(DiagramPoint {
                dimension: dim,
                birth: sign * birth,
                death: sign * death,
                essential: false,
            });
        }
    }
    for &b in &pairing.essential {
        let dim = filtration.simplex(b).dimension();
        if keep(dim) {
            points.push(DiagramPoint {
                dimension: dim,
                birth: sign * filtration.value(b),
                death: sign * internal_cap,
                essential: true,
            });
        }
    }
    PersistenceDiagram::new(orientation, scale_cap, points)
}

/// Persistence of the sublevel (or superlevel) filtration of a scalar field.
/// The cap for essential classes is the field maximum (sublevel) or minimum
/// (superlevel).
pub fn grid_diag_from_field(field: &ScalarField, sublevel: bool) -> Result<PersistenceDiagram> {
    let filtration = build_grid_filtration(field, sublevel)?;
    let pairing = reduce_boundary_matrix(&filtration)?;
    let (orientation, cap) = grid_cap(field, sublevel);
    extract_diagram(&pairing, &filtration, orientation, cap, None)
}

fn grid_cap(field: &ScalarField, sublevel: bool) -> (Orientation, f64) {
    let fold = if sublevel { f64::max } else { f64::min };
    let cap = field.values().iter().copied().fold(
        if sublevel {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        },
        fold,
    );
    let orientation = if sublevel {
        Orientation::Sublevel
    } else {
        Orientation::Superlevel
    };
    (orientation, cap)
}

/// Evaluates an estimator over a grid and computes the persistence of its
/// sublevel (or superlevel) sets.
pub fn grid_diag(
    x: &PointCloud,
    estimator: Estimator,
    limits: &[(f64, f64)],
    by: f64,
    sublevel: bool,
) -> Result<PersistenceDiagram> {
    Ok(grid_diag_with_field(x, estimator, limits, by, sublevel)?.0)
}

/// Like [`grid_diag`] but also returns the evaluated field, for callers that
/// reuse it (plots, bands).
pub fn grid_diag_with_field(
    x: &PointCloud,
    estimator: Estimator,
    limits: &[(f64, f64)],
    by: f64,
    sublevel: bool,
) -> Result<(PersistenceDiagram, ScalarField)> {
    let grid = EvaluationGrid::new(limits, by)?;
    let queries = grid.to_point_cloud();
    let values = estimator.evaluate(x, &queries)?;
    let field = ScalarField::new(grid, values)?;
    let diagram = grid_diag_from_field(&field, sublevel)?;
    Ok((diagram, field))
}

/// Persistence diagram of the Vietoris–Rips filtration. Essential classes are
/// capped at `maxscale`.
pub fn rips_diag(
    input: RipsInput<'_>,
    maxdimension: usize,
    maxscale: f64,
) -> Result<PersistenceDiagram> {
    let filtration = build_rips_filtration(input, maxdimension, maxscale)?;
    let pairing = reduce_boundary_matrix(&filtration)?;
    extract_diagram(
        &pairing,
        &filtration,
        Orientation::Sublevel,
        maxscale,
        Some(maxdimension),
    )
}
