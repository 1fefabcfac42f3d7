//! Minimal deterministic SVG writer. Coordinates are formatted with nine
//! significant digits so identical inputs produce byte-identical documents.

use std::fmt::Write as _;

pub const WIDTH: f64 = 640.0;
pub const HEIGHT: f64 = 480.0;
pub const MARGIN: f64 = 52.0;

/// Nine significant digits.
pub fn fmt9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{v:.8e}")
}

/// Maps a data rectangle onto the canvas (y axis flipped).
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Frame {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        let pad = |lo: f64, hi: f64| {
            let span = if hi > lo { hi - lo } else { 1.0 };
            (lo - 0.05 * span, hi + 0.05 * span)
        };
        let (x_min, x_max) = pad(x_min, x_max);
        let (y_min, y_max) = pad(y_min, y_max);
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    pub fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

pub struct Svg {
    body: String,
}

impl Svg {
    pub fn new() -> Self {
        Svg {
            body: String::new(),
        }
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="{}"/>"#,
            fmt9(x1),
            fmt9(y1),
            fmt9(x2),
            fmt9(y2),
            stroke,
            fmt9(width)
        );
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            fmt9(cx),
            fmt9(cy),
            fmt9(r),
            fill
        );
    }

    /// Open triangle marker centered at (cx, cy).
    pub fn triangle_marker(&mut self, cx: f64, cy: f64, r: f64, stroke: &str) {
        let pts = [
            (cx, cy - r),
            (cx - 0.866 * r, cy + 0.5 * r),
            (cx + 0.866 * r, cy + 0.5 * r),
        ];
        let coords: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{},{}", fmt9(*x), fmt9(*y)))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            coords.join(" "),
            stroke
        );
    }

    pub fn polygon(&mut self, points: &[(f64, f64)], fill: &str, opacity: f64) {
        let coords: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{},{}", fmt9(*x), fmt9(*y)))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{}" fill-opacity="{}" stroke="none"/>"#,
            coords.join(" "),
            fill,
            fmt9(opacity)
        );
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, width: f64) {
        let coords: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{},{}", fmt9(*x), fmt9(*y)))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            coords.join(" "),
            stroke,
            fmt9(width)
        );
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            fmt9(x),
            fmt9(y),
            fmt9(w),
            fmt9(h),
            fill
        );
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, content: &str) {
        let _ = writeln!(
            self.body,
            r##"<text x="{}" y="{}" font-size="{}" font-family="monospace" fill="#333">{}</text>"##,
            fmt9(x),
            fmt9(y),
            fmt9(size),
            content
        );
    }

    /// Axes box with min/max labels for the frame.
    pub fn axes(&mut self, frame: &Frame, x_label: &str, y_label: &str) {
        let (x0, x1) = (frame.x(frame.x_min), frame.x(frame.x_max));
        let (y0, y1) = (frame.y(frame.y_min), frame.y(frame.y_max));
        self.line(x0, y0, x1, y0, "#333", 1.0);
        self.line(x0, y0, x0, y1, "#333", 1.0);
        self.text(x0, y0 + 16.0, 10.0, &format!("{:.3}", frame.x_min));
        self.text(x1 - 30.0, y0 + 16.0, 10.0, &format!("{:.3}", frame.x_max));
        self.text(4.0, y0, 10.0, &format!("{:.3}", frame.y_min));
        self.text(4.0, y1 + 4.0, 10.0, &format!("{:.3}", frame.y_max));
        self.text(WIDTH / 2.0 - 20.0, HEIGHT - 12.0, 11.0, x_label);
        self.text(8.0, 16.0, 11.0, y_label);
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n{}</svg>\n",
            WIDTH as u32, HEIGHT as u32, WIDTH as u32, HEIGHT as u32, WIDTH as u32, HEIGHT as u32, self.body
        )
    }
}
