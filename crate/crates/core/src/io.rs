//! CSV and JSON serialization of the crate's artifacts.
//!
//! CSV files are comma-separated with a header row and '.' decimal
//! separator, locale independent. Floats use the shortest representation
//! that round-trips; infinities are written as `inf` / `-inf` tokens (and as
//! JSON strings, since JSON numbers cannot carry them).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::estimators::{EvaluationGrid, PointCloud, ScalarField};
use crate::filtration::DistanceMatrix;
use crate::persistence::{DiagramPoint, Orientation, PersistenceDiagram};
use crate::summaries::SummaryCurve;

/// Shortest round-trip representation, with explicit tokens for non-finite
/// values.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "nan" => Ok(f64::NAN),
        t => t
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad float {t:?}"))),
    }
}

/// A float as a JSON value: a number when finite, a token string otherwise.
pub fn json_f64(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::Value::String(fmt_f64(v))
    }
}

pub fn parse_json_f64(v: &serde_json::Value) -> Result<f64> {
    match v {
        serde_json::Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
        serde_json::Value::String(s) => parse_f64(s),
        other => Err(Error::Parse(format!("expected a float, got {other}"))),
    }
}

fn split_rows(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty())
}

fn looks_numeric(line: &str) -> bool {
    line.split(',').all(|f| parse_f64(f).is_ok())
}

// ---------------------------------------------------------------------------
// Point clouds

pub fn write_points_csv(cloud: &PointCloud) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..cloud.dim()).map(|k| format!("x{k}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for p in cloud.iter() {
        let row: Vec<String> = p.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reads a point cloud; a leading non-numeric line is treated as the header.
pub fn read_points_csv(text: &str) -> Result<PointCloud> {
    let mut rows = split_rows(text).peekable();
    if let Some(first) = rows.peek() {
        if !looks_numeric(first) {
            rows.next();
        }
    }
    let mut points: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        points.push(row.split(',').map(parse_f64).collect::<Result<_>>()?);
    }
    PointCloud::new(&points)
}

/// Reads a headerless square distance matrix.
pub fn read_distance_matrix_csv(text: &str) -> Result<DistanceMatrix> {
    let mut data = Vec::new();
    let mut n = 0;
    for row in split_rows(text) {
        let vals: Vec<f64> = row.split(',').map(parse_f64).collect::<Result<_>>()?;
        if n == 0 {
            n = vals.len();
        } else if vals.len() != n {
            return Err(Error::Parse("ragged distance matrix".into()));
        }
        data.extend(vals);
    }
    if data.len() != n * n {
        return Err(Error::Parse(format!(
            "distance matrix is {} x {} but has {} rows",
            n,
            n,
            data.len() / n.max(1)
        )));
    }
    DistanceMatrix::new(data, n)
}

// ---------------------------------------------------------------------------
// Scalar fields (grid point coordinates + value per row)

pub fn write_field_csv(field: &ScalarField) -> String {
    let grid = field.grid();
    let mut out = String::new();
    let mut header: Vec<String> = (0..grid.dim()).map(|k| format!("x{k}")).collect();
    header.push("value".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for (i, &v) in field.values().iter().enumerate() {
        for c in grid.point(i) {
            let _ = write!(out, "{},", fmt_f64(c));
        }
        out.push_str(&fmt_f64(v));
        out.push('\n');
    }
    out
}

/// Fields evaluated by the CLI may contain infinities, which
/// [`ScalarField`] rejects; the raw rows come back instead.
pub fn read_field_csv(text: &str) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut rows = split_rows(text).peekable();
    if let Some(first) = rows.peek() {
        if !looks_numeric(first) {
            rows.next();
        }
    }
    let mut coords = Vec::new();
    let mut values = Vec::new();
    for row in rows {
        let mut vals: Vec<f64> = row.split(',').map(parse_f64).collect::<Result<_>>()?;
        let value = vals
            .pop()
            .ok_or_else(|| Error::Parse("empty field row".into()))?;
        if vals.is_empty() {
            return Err(Error::Parse("field row without coordinates".into()));
        }
        coords.push(vals);
        values.push(value);
    }
    Ok((coords, values))
}

pub fn write_field_json(field: &ScalarField) -> serde_json::Value {
    field_json_parts(field.grid(), field.values())
}

pub fn field_json_parts(grid: &EvaluationGrid, values: &[f64]) -> serde_json::Value {
    serde_json::json!({
        "grid": {
            "limits": grid.limits(),
            "by": grid.by(),
            "axis_lens": grid.axis_lens(),
        },
        "values": values.iter().map(|&v| json_f64(v)).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Persistence diagrams

pub fn write_diagram_csv(diagram: &PersistenceDiagram) -> String {
    let mut out = String::from("dimension,birth,death,essential\n");
    for p in diagram.points() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            p.dimension,
            fmt_f64(p.birth),
            fmt_f64(p.death),
            p.essential
        );
    }
    out
}

/// Reads the diagram table. The CSV carries no orientation or cap metadata:
/// the orientation is inferred (superlevel when any birth exceeds its
/// death), the cap from the extremal essential death, falling back to the
/// data range.
pub fn read_diagram_csv(text: &str) -> Result<PersistenceDiagram> {
    let mut points = Vec::new();
    for row in split_rows(text).skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!("bad diagram row {row:?}")));
        }
        let dimension: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad dimension {:?}", fields[0])))?;
        let birth = parse_f64(fields[1])?;
        let death = parse_f64(fields[2])?;
        let essential = match fields[3].trim() {
            "true" => true,
            "false" => false,
            other => return Err(Error::Parse(format!("bad essential flag {other:?}"))),
        };
        points.push(DiagramPoint {
            dimension,
            birth,
            death,
            essential,
        });
    }
    let orientation = if points.iter().any(|p| p.birth > p.death) {
        Orientation::Superlevel
    } else {
        Orientation::Sublevel
    };
    let cap = infer_cap(&points, orientation);
    PersistenceDiagram::new(orientation, cap, points)
}

fn infer_cap(points: &[DiagramPoint], orientation: Orientation) -> f64 {
    let essential_deaths: Vec<f64> = points
        .iter()
        .filter(|p| p.essential)
        .map(|p| p.death)
        .collect();
    let all_deaths: Vec<f64> = points.iter().map(|p| p.death).collect();
    let pool = if essential_deaths.is_empty() {
        all_deaths
    } else {
        essential_deaths
    };
    let fold: fn(f64, f64) -> f64 = match orientation {
        Orientation::Sublevel => f64::max,
        Orientation::Superlevel => f64::min,
    };
    pool.into_iter().fold(0.0, fold)
}

pub fn write_diagram_json(diagram: &PersistenceDiagram) -> serde_json::Value {
    serde_json::to_value(diagram).expect("diagram values are finite")
}

pub fn read_diagram_json(value: &serde_json::Value) -> Result<PersistenceDiagram> {
    let raw: PersistenceDiagram = serde_json::from_value(value.clone())
        .map_err(|e| Error::Parse(format!("bad diagram JSON: {e}")))?;
    // Re-validate: deserialization bypasses the orientation checks.
    PersistenceDiagram::new(raw.orientation(), raw.scale_cap(), raw.points().to_vec())
}

// ---------------------------------------------------------------------------
// Summary curves

pub fn write_curve_csv(curve: &SummaryCurve) -> String {
    let mut out = String::from("t,value\n");
    for (&t, &v) in curve.tseq.iter().zip(&curve.values) {
        let _ = writeln!(out, "{},{}", fmt_f64(t), fmt_f64(v));
    }
    out
}

pub fn read_curve_csv(text: &str) -> Result<SummaryCurve> {
    let mut tseq = Vec::new();
    let mut values = Vec::new();
    for row in split_rows(text).skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!("bad curve row {row:?}")));
        }
        tseq.push(parse_f64(fields[0])?);
        values.push(parse_f64(fields[1])?);
    }
    Ok(SummaryCurve {
        tseq,
        values,
        no_features: false,
    })
}

/// Reads a matrix of curve samples, one curve per row, optional header.
pub fn read_curve_matrix_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = split_rows(text).peekable();
    if let Some(first) = rows.peek() {
        if !looks_numeric(first) {
            rows.next();
        }
    }
    let mut curves = Vec::new();
    for row in rows {
        curves.push(row.split(',').map(parse_f64).collect::<Result<_>>()?);
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_tokens_round_trip() {
        for v in [
            0.0,
            -1.5,
            1.0 / 3.0,
            1e-300,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ] {
            let s = fmt_f64(v);
            let back = parse_f64(&s).unwrap();
            if v.is_finite() {
                assert_eq!(v, back, "token {s}");
            } else {
                assert_eq!(v, back);
            }
        }
        assert!(parse_f64("nan").unwrap().is_nan());
        assert!(parse_f64("abc").is_err());
    }

    #[test]
    fn point_cloud_csv_round_trip() {
        let cloud = PointCloud::new(&[&[0.25, -1.0], &[1.0 / 3.0, 2e-8]]).unwrap();
        let text = write_points_csv(&cloud);
        assert!(text.starts_with("x0,x1\n"));
        let back = read_points_csv(&text).unwrap();
        assert_eq!(cloud, back);
        // Headerless input also parses.
        let headerless = read_points_csv("1.0,2.0\n3.0,4.0\n").unwrap();
        assert_eq!(headerless.len(), 2);
    }

    #[test]
    fn diagram_csv_round_trip_and_inference() {
        let points = vec![
            DiagramPoint {
                dimension: 0,
                birth: 0.0,
                death: 1.5,
                essential: false,
            },
            DiagramPoint {
                dimension: 1,
                birth: 0.5,
                death: 2.0,
                essential: true,
            },
        ];
        let d = PersistenceDiagram::new(Orientation::Sublevel, 2.0, points).unwrap();
        let text = write_diagram_csv(&d);
        let back = read_diagram_csv(&text).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn superlevel_diagram_is_inferred() {
        let text = "dimension,birth,death,essential\n0,3,1,false\n";
        let d = read_diagram_csv(text).unwrap();
        assert_eq!(d.orientation(), Orientation::Superlevel);
    }

    #[test]
    fn diagram_json_round_trip() {
        let d = PersistenceDiagram::new(
            Orientation::Superlevel,
            0.25,
            vec![DiagramPoint {
                dimension: 1,
                birth: 2.0,
                death: 0.5,
                essential: false,
            }],
        )
        .unwrap();
        let back = read_diagram_json(&write_diagram_json(&d)).unwrap();
        assert_eq!(d, back);
    }

    #[test]
    fn curve_csv_round_trip() {
        let curve = SummaryCurve {
            tseq: vec![0.0, 0.5, 1.0],
            values: vec![0.0, 0.25, 0.0],
            no_features: false,
        };
        let back = read_curve_csv(&write_curve_csv(&curve)).unwrap();
        assert_eq!(curve, back);
    }

    #[test]
    fn field_csv_handles_infinities() {
        let grid = EvaluationGrid::new(&[(0.0, 1.0)], 1.0).unwrap();
        let field = ScalarField::new(grid.clone(), vec![0.5, 1.5]).unwrap();
        let text = write_field_csv(&field);
        assert!(text.starts_with("x0,value\n"));
        let (coords, values) = read_field_csv(&text).unwrap();
        assert_eq!(coords, vec![vec![0.0], vec![1.0]]);
        assert_eq!(values, vec![0.5, 1.5]);

        let (_, values) = read_field_csv("x0,value\n0,inf\n1,2\n").unwrap();
        assert_eq!(values[0], f64::INFINITY);
    }

    #[test]
    fn distance_matrix_csv() {
        let m = read_distance_matrix_csv("0,1\n1,0\n").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.get(0, 1), 1.0);
        assert!(read_distance_matrix_csv("0,1\n1,0,3\n").is_err());
    }
}
