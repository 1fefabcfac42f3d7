//! Static SVG figures: diagrams, barcodes, rotated diagrams, summary
//! curves, confidence bands, dendrograms, and scalar-field heat maps.

use tda_core::clustering::ClusterTree;
use tda_core::summaries::SummaryCurve;
use tda_core::{DiagramPoint, Orientation, PersistenceDiagram};

use crate::svg::{Frame, Svg, HEIGHT, MARGIN, WIDTH};

const DIM_COLORS: [&str; 4] = ["#000000", "#cc2222", "#2255cc", "#22aa66"];

fn dim_color(dim: usize) -> &'static str {
    DIM_COLORS[dim.min(DIM_COLORS.len() - 1)]
}

fn diagram_range(d: &PersistenceDiagram) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in d.points() {
        lo = lo.min(p.birth).min(p.death);
        hi = hi.max(p.birth).max(p.death);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}

fn draw_diagram_points(svg: &mut Svg, frame: &Frame, points: &[DiagramPoint]) {
    for p in points {
        let (cx, cy) = (frame.x(p.birth), frame.y(p.death));
        match p.dimension {
            0 => svg.circle(cx, cy, 3.5, dim_color(0)),
            1 => svg.triangle_marker(cx, cy, 4.5, dim_color(1)),
            d => svg.triangle_marker(cx, cy, 4.0, dim_color(d)),
        }
    }
}

/// Birth/death scatter with the diagonal and an optional confidence strip of
/// the given vertical thickness along it (drawn on the side the points live
/// on, which depends on the orientation).
pub fn plot_diagram(d: &PersistenceDiagram, band: Option<f64>) -> String {
    let (lo, hi) = diagram_range(d);
    let frame = Frame::new(lo, hi, lo, hi);
    let mut svg = Svg::new();
    svg.axes(&frame, "birth", "death");
    if let Some(width) = band {
        let sign = match d.orientation() {
            Orientation::Sublevel => 1.0,
            Orientation::Superlevel => -1.0,
        };
        let (a, b) = (frame.x_min, frame.x_max);
        svg.polygon(
            &[
                (frame.x(a), frame.y(a)),
                (frame.x(b), frame.y(b)),
                (frame.x(b), frame.y(b + sign * width)),
                (frame.x(a), frame.y(a + sign * width)),
            ],
            "#f2a0bb",
            0.55,
        );
    }
    svg.line(
        frame.x(frame.x_min),
        frame.y(frame.x_min),
        frame.x(frame.x_max),
        frame.y(frame.x_max),
        "#777777",
        1.0,
    );
    draw_diagram_points(&mut svg, &frame, d.points());
    svg.finish()
}

/// One horizontal segment per pair, grouped by dimension, births ascending.
pub fn plot_barcode(d: &PersistenceDiagram) -> String {
    let mut points = d.points().to_vec();
    points.sort_by(|a, b| {
        a.dimension
            .cmp(&b.dimension)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
    let (lo, hi) = diagram_range(d);
    let rows = points.len().max(1) as f64;
    let frame = Frame::new(lo, hi, 0.0, rows);
    let mut svg = Svg::new();
    svg.axes(&frame, "scale", "");
    for (i, p) in points.iter().enumerate() {
        let y = frame.y(rows - (i as f64 + 0.5));
        let (a, b) = (p.birth.min(p.death), p.birth.max(p.death));
        svg.line(frame.x(a), y, frame.x(b), y, dim_color(p.dimension), 2.5);
    }
    svg.finish()
}

/// Rotated diagram: each pair at ((b + d) / 2, |d - b| / 2). A band of
/// vertical thickness `w` in the original coordinates becomes the strip
/// below half-life `w / 2`.
pub fn plot_rotated(d: &PersistenceDiagram, band: Option<f64>) -> String {
    let coords: Vec<(f64, f64, usize)> = d
        .points()
        .iter()
        .map(|p| ((p.birth + p.death) / 2.0, p.lifetime() / 2.0, p.dimension))
        .collect();
    let (mut x_lo, mut x_hi, mut y_hi) = (0.0f64, 1.0f64, 1.0f64);
    for &(x, y, _) in &coords {
        x_lo = x_lo.min(x);
        x_hi = x_hi.max(x);
        y_hi = y_hi.max(y);
    }
    let frame = Frame::new(x_lo, x_hi, 0.0, y_hi);
    let mut svg = Svg::new();
    svg.axes(&frame, "(birth+death)/2", "(death-birth)/2");
    if let Some(width) = band {
        svg.polygon(
            &[
                (frame.x(frame.x_min), frame.y(0.0)),
                (frame.x(frame.x_max), frame.y(0.0)),
                (frame.x(frame.x_max), frame.y(width / 2.0)),
                (frame.x(frame.x_min), frame.y(width / 2.0)),
            ],
            "#f2a0bb",
            0.55,
        );
    }
    svg.line(
        frame.x(frame.x_min),
        frame.y(0.0),
        frame.x(frame.x_max),
        frame.y(0.0),
        "#777777",
        1.0,
    );
    for &(x, y, dim) in &coords {
        match dim {
            0 => svg.circle(frame.x(x), frame.y(y), 3.5, dim_color(0)),
            d => svg.triangle_marker(frame.x(x), frame.y(y), 4.5, dim_color(d)),
        }
    }
    svg.finish()
}

/// Line plot of a summary curve.
pub fn plot_curve(curve: &SummaryCurve, label: &str) -> String {
    let y_hi = curve.values.iter().copied().fold(0.0, f64::max);
    let frame = Frame::new(
        curve.tseq[0],
        *curve.tseq.last().unwrap(),
        0.0,
        y_hi.max(1e-12),
    );
    let mut svg = Svg::new();
    svg.axes(&frame, "t", label);
    let pts: Vec<(f64, f64)> = curve
        .tseq
        .iter()
        .zip(&curve.values)
        .map(|(&t, &v)| (frame.x(t), frame.y(v)))
        .collect();
    svg.polyline(&pts, "#2255cc", 1.6);
    svg.finish()
}

/// Center curve with a shaded band, over a one-dimensional axis.
pub fn plot_band(axis: &[f64], center: &[f64], lower: &[f64], upper: &[f64]) -> String {
    let y_lo = lower.iter().copied().fold(f64::INFINITY, f64::min);
    let y_hi = upper.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(axis[0], *axis.last().unwrap(), y_lo.min(0.0), y_hi);
    let mut svg = Svg::new();
    svg.axes(&frame, "x", "value");
    let mut ring: Vec<(f64, f64)> = axis
        .iter()
        .zip(lower)
        .map(|(&x, &v)| (frame.x(x), frame.y(v)))
        .collect();
    ring.extend(
        axis.iter()
            .zip(upper)
            .rev()
            .map(|(&x, &v)| (frame.x(x), frame.y(v))),
    );
    svg.polygon(&ring, "#f2a0bb", 0.6);
    let pts: Vec<(f64, f64)> = axis
        .iter()
        .zip(center)
        .map(|(&x, &v)| (frame.x(x), frame.y(v)))
        .collect();
    svg.polyline(&pts, "#cc2222", 1.8);
    svg.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DendrogramAxis {
    Lambda,
    Alpha,
    Kappa,
}

/// Dendrogram over the chosen coordinate. λ grows upward; the α and κ axes
/// are drawn inverted (mass grows downward) so leaves always point up.
pub fn plot_dendrogram(tree: &ClusterTree, axis: DendrogramAxis) -> String {
    let coord = |id: usize, top: bool| -> f64 {
        let b = &tree.branches[id];
        match (axis, top) {
            (DendrogramAxis::Lambda, true) => b.lambda_death,
            (DendrogramAxis::Lambda, false) => b.lambda_birth,
            (DendrogramAxis::Alpha, true) => b.alpha_death,
            (DendrogramAxis::Alpha, false) => b.alpha_birth,
            (DendrogramAxis::Kappa, true) => b.kappa_death,
            (DendrogramAxis::Kappa, false) => b.kappa_birth,
        }
    };
    // Leaf x positions from the layout order; internal branches center on
    // their children.
    let n_branches = tree.branches.len();
    let mut x = vec![f64::NAN; n_branches];
    for (slot, &leaf) in tree.leaves.iter().enumerate() {
        x[leaf] = slot as f64;
    }
    // Children are created before their parent, so ascending ids fill
    // every child position before it is needed.
    for id in 0..n_branches {
        if x[id].is_nan() {
            let kids = tree.children_of(id);
            let sum: f64 = kids.iter().map(|&c| x[c]).sum();
            x[id] = sum / kids.len() as f64;
        }
    }

    let mut v_lo = f64::INFINITY;
    let mut v_hi = f64::NEG_INFINITY;
    for id in 0..n_branches {
        for top in [true, false] {
            let v = coord(id, top);
            if v.is_finite() {
                v_lo = v_lo.min(v);
                v_hi = v_hi.max(v);
            }
        }
    }
    if !v_lo.is_finite() {
        v_lo = 0.0;
        v_hi = 1.0;
    }
    let flip = axis != DendrogramAxis::Lambda;
    let map = |v: f64| if flip { v_hi - (v - v_lo) } else { v };
    let frame = Frame::new(
        -0.5,
        (tree.leaves.len().max(1) as f64) - 0.5,
        v_lo,
        v_hi.max(v_lo + 1e-12),
    );

    let mut svg = Svg::new();
    let label = match axis {
        DendrogramAxis::Lambda => "lambda",
        DendrogramAxis::Alpha => "alpha",
        DendrogramAxis::Kappa => "kappa",
    };
    // Hand-drawn axis: the flipped axes label their extremes explicitly.
    svg.line(
        frame.x(frame.x_min),
        frame.y(frame.y_min),
        frame.x(frame.x_min),
        frame.y(frame.y_max),
        "#333333",
        1.0,
    );
    let (bottom_label, top_label) = if flip { (v_hi, v_lo) } else { (v_lo, v_hi) };
    svg.text(
        4.0,
        frame.y(frame.y_min),
        10.0,
        &format!("{bottom_label:.3}"),
    );
    svg.text(
        4.0,
        frame.y(frame.y_max) + 4.0,
        10.0,
        &format!("{top_label:.3}"),
    );
    svg.text(8.0, 16.0, 11.0, label);

    for b in &tree.branches {
        let attach = match b.parent {
            Some(p) => coord(p, true),
            None => coord(b.id, false),
        };
        let (y0, y1) = (frame.y(map(attach)), frame.y(map(coord(b.id, true))));
        let bx = frame.x(x[b.id]);
        svg.line(bx, y0, bx, y1, "#2255cc", 2.0);
    }
    // Horizontal connectors at each parent's top coordinate.
    for id in 0..n_branches {
        let kids = tree.children_of(id);
        if kids.is_empty() {
            continue;
        }
        let y = frame.y(map(coord(id, true)));
        let xs: Vec<f64> = kids.iter().map(|&c| frame.x(x[c])).collect();
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        svg.line(lo, y, hi, y, "#2255cc", 2.0);
    }
    svg.finish()
}

fn colormap(t: f64) -> String {
    let stops = [
        (0.13f64, 0.16f64, 0.40f64),
        (0.22, 0.56, 0.69),
        (0.95, 0.90, 0.55),
        (0.85, 0.33, 0.17),
    ];
    let t = t.clamp(0.0, 1.0) * (stops.len() - 1) as f64;
    let i = (t.floor() as usize).min(stops.len() - 2);
    let f = t - i as f64;
    let lerp = |a: f64, b: f64| a + f * (b - a);
    let (r, g, b) = (
        lerp(stops[i].0, stops[i + 1].0),
        lerp(stops[i].1, stops[i + 1].1),
        lerp(stops[i].2, stops[i + 1].2),
    );
    format!(
        "#{:02x}{:02x}{:02x}",
        (r * 255.0) as u8,
        (g * 255.0) as u8,
        (b * 255.0) as u8
    )
}

/// Heat map of a 2D field or a polyline for a 1D one. Rows are grid points
/// as written by the estimators; infinities are clamped to the finite range.
pub fn plot_field(coords: &[Vec<f64>], values: &[f64]) -> Result<String, String> {
    let dim = coords.first().map(|c| c.len()).unwrap_or(0);
    let finite_max = values
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let finite_min = values
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(f64::INFINITY, f64::min);
    let clamp = |v: f64| {
        if v.is_finite() {
            v
        } else if v > 0.0 {
            finite_max
        } else {
            finite_min
        }
    };
    match dim {
        1 => {
            let curve = SummaryCurve {
                tseq: coords.iter().map(|c| c[0]).collect(),
                values: values.iter().map(|&v| clamp(v)).collect(),
                no_features: false,
            };
            Ok(plot_curve(&curve, "value"))
        }
        2 => {
            let mut xs: Vec<f64> = coords.iter().map(|c| c[0]).collect();
            let mut ys: Vec<f64> = coords.iter().map(|c| c[1]).collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            ys.sort_by(f64::total_cmp);
            ys.dedup();
            let span = finite_max - finite_min;
            let frame = Frame::new(xs[0], *xs.last().unwrap(), ys[0], *ys.last().unwrap());
            let mut svg = Svg::new();
            svg.axes(&frame, "x0", "x1");
            let cell_w = (WIDTH - 2.0 * MARGIN) / xs.len() as f64;
            let cell_h = (HEIGHT - 2.0 * MARGIN) / ys.len() as f64;
            for (c, &v) in coords.iter().zip(values) {
                let t = if span > 0.0 {
                    (clamp(v) - finite_min) / span
                } else {
                    0.5
                };
                let cx = frame.x(c[0]);
                let cy = frame.y(c[1]);
                svg.rect(
                    cx - cell_w / 2.0,
                    cy - cell_h / 2.0,
                    cell_w,
                    cell_h,
                    &colormap(t),
                );
            }
            Ok(svg.finish())
        }
        d => Err(format!("field plots support 1 or 2 dimensions, got {d}")),
    }
}

/// Per-parameter persistence intervals with the significance band: for each
/// scanned parameter, one vertical segment per feature (its lifetime) and a
/// shaded strip up to twice the band width at that parameter.
pub fn plot_max_persistence(result: &tda_core::statistics::MaxPersistenceResult) -> String {
    let params: Vec<f64> = result.per_parameter.iter().map(|p| p.parameter).collect();
    let x_lo = params.iter().copied().fold(f64::INFINITY, f64::min);
    let x_hi = params.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut y_hi = 0.0f64;
    for p in &result.per_parameter {
        y_hi = y_hi.max(2.0 * p.band_width);
        for pt in p.diagram.points() {
            y_hi = y_hi.max(pt.lifetime());
        }
    }
    let step = if params.len() > 1 {
        (x_hi - x_lo) / (params.len() - 1) as f64
    } else {
        1.0
    };
    let frame = Frame::new(x_lo - step / 2.0, x_hi + step / 2.0, 0.0, y_hi.max(1e-12));
    let mut svg = Svg::new();
    svg.axes(&frame, "parameter", "persistence");
    for p in &result.per_parameter {
        let half = 0.4 * step;
        svg.polygon(
            &[
                (frame.x(p.parameter - half), frame.y(0.0)),
                (frame.x(p.parameter + half), frame.y(0.0)),
                (frame.x(p.parameter + half), frame.y(2.0 * p.band_width)),
                (frame.x(p.parameter - half), frame.y(2.0 * p.band_width)),
            ],
            "#f2a0bb",
            0.55,
        );
        let features = p.diagram.points();
        let n = features.len().max(1) as f64;
        for (i, pt) in features.iter().enumerate() {
            let jitter = (i as f64 + 0.5) / n - 0.5;
            let x = frame.x(p.parameter + 0.6 * step * jitter);
            svg.line(
                x,
                frame.y(0.0),
                x,
                frame.y(pt.lifetime()),
                dim_color(pt.dimension),
                1.6,
            );
        }
    }
    svg.finish()
}
