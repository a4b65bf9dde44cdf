//! SVG rendering of curves, control polygons and boxes.
//!
//! Output is plain SVG 1.1 with fixed-precision coordinates, so identical
//! inputs give identical bytes.

use std::fmt::Write;

use bezmerge::bezier::{BezierSegment, CompositeBezier, Point};
use bezmerge::merge::BoxBounds;

/// Samples per drawn curve.
pub const CURVE_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct Stroke {
    pub color: String,
    pub width: f64,
    /// SVG `stroke-dasharray`; solid when `None`.
    pub dash: Option<String>,
}

impl Stroke {
    fn new(color: &str, width: f64, dash: Option<&str>) -> Self {
        Stroke {
            color: color.into(),
            width,
            dash: dash.map(Into::into),
        }
    }

    fn attributes(&self) -> String {
        let mut s = format!(
            r#"fill="none" stroke="{}" stroke-width="{}""#,
            self.color, self.width
        );
        if let Some(d) = &self.dash {
            write!(s, r#" stroke-dasharray="{d}""#).unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub width: f64,
    pub height: f64,
    /// Fraction of each canvas side left blank around the drawing.
    pub margin: f64,
    pub original: Stroke,
    pub merged: Stroke,
    pub original_polygon: Stroke,
    pub merged_polygon: Stroke,
    pub frame: Stroke,
    pub hull: Stroke,
    pub marker_radius: f64,
}

impl Default for PlotStyle {
    fn default() -> Self {
        PlotStyle {
            width: 600.0,
            height: 600.0,
            margin: 0.05,
            original: Stroke::new("blue", 2.0, None),
            merged: Stroke::new("red", 2.0, Some("8 4")),
            original_polygon: Stroke::new("blue", 0.75, None),
            merged_polygon: Stroke::new("red", 0.75, None),
            frame: Stroke::new("black", 1.25, Some("10 4 2 4")),
            hull: Stroke::new("gray", 1.0, Some("2 2")),
            marker_radius: 3.0,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PlotError {
    #[error("plots need planar curves, got dimension {0}")]
    Dimension(usize),
    #[error("canvas size must be positive")]
    Canvas,
    #[error("nothing to draw")]
    Empty,
}

#[derive(Debug, Clone, Default)]
pub struct Plot<'a> {
    pub original: Option<&'a CompositeBezier>,
    pub merged: Option<&'a BezierSegment>,
    pub bounds: Option<&'a BoxBounds>,
    /// Outline the convex hull of the original control points.
    pub hull: bool,
}

/// Counter-clockwise convex hull by the monotone chain.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &Point, a: &Point, b: &Point| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

struct Mapping {
    min: [f64; 2],
    scale: f64,
    offset: [f64; 2],
    height: f64,
}

impl Mapping {
    /// Fit `[min, max]` into the canvas keeping the aspect ratio.
    fn new(min: [f64; 2], max: [f64; 2], style: &PlotStyle) -> Self {
        let inner_w = style.width * (1.0 - 2.0 * style.margin);
        let inner_h = style.height * (1.0 - 2.0 * style.margin);
        let span_x = (max[0] - min[0]).max(f64::MIN_POSITIVE);
        let span_y = (max[1] - min[1]).max(f64::MIN_POSITIVE);
        let scale = if max[0] == min[0] && max[1] == min[1] {
            1.0
        } else {
            (inner_w / span_x).min(inner_h / span_y)
        };
        let offset = [
            style.width * style.margin + 0.5 * (inner_w - scale * (max[0] - min[0])),
            style.height * style.margin + 0.5 * (inner_h - scale * (max[1] - min[1])),
        ];
        Mapping {
            min,
            scale,
            offset,
            height: style.height,
        }
    }

    fn map(&self, p: &[f64]) -> (f64, f64) {
        let x = self.offset[0] + self.scale * (p[0] - self.min[0]);
        // mathematical orientation: y grows upward
        let y = self.height - (self.offset[1] + self.scale * (p[1] - self.min[1]));
        (x, y)
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn path(points: &[Point], mapping: &Mapping, closed: bool) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let (x, y) = mapping.map(p);
        write!(
            d,
            "{}{} {}",
            if i == 0 { "M" } else { " L" },
            num(x),
            num(y)
        )
        .unwrap();
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

fn sample_segment(seg: &BezierSegment) -> Vec<Point> {
    (0..CURVE_SAMPLES)
        .map(|i| seg.evaluate(i as f64 / (CURVE_SAMPLES - 1) as f64))
        .collect()
}

fn sample_composite(curve: &CompositeBezier) -> Vec<Point> {
    (0..CURVE_SAMPLES)
        .map(|i| curve.evaluate(i as f64 / (CURVE_SAMPLES - 1) as f64))
        .collect()
}

impl Plot<'_> {
    fn check(&self) -> Result<(), PlotError> {
        let dims = [
            self.original.map(|c| c.dim()),
            self.merged.map(|s| s.dim()),
            self.bounds.map(|b| b.dim()),
        ];
        if let Some(d) = dims.iter().flatten().find(|&&d| d != 2) {
            return Err(PlotError::Dimension(*d));
        }
        if self.original.is_none() && self.merged.is_none() {
            return Err(PlotError::Empty);
        }
        Ok(())
    }

    fn extent(&self, curves: &[&[Point]]) -> ([f64; 2], [f64; 2]) {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        let mut include = |p: &[f64]| {
            for h in 0..2 {
                min[h] = min[h].min(p[h]);
                max[h] = max[h].max(p[h]);
            }
        };
        for c in curves {
            c.iter().for_each(|p| include(p));
        }
        if let Some(orig) = self.original {
            orig.control_points().for_each(|p| include(p));
        }
        if let Some(m) = self.merged {
            m.points().iter().for_each(|p| include(p));
        }
        if let Some(b) = self.bounds {
            include(b.lower());
            include(b.upper());
        }
        (min, max)
    }

    pub fn render(&self, style: &PlotStyle) -> Result<String, PlotError> {
        self.check()?;
        if !(style.width > 0.0 && style.height > 0.0) {
            return Err(PlotError::Canvas);
        }
        let original_samples = self.original.map(sample_composite);
        let merged_samples = self.merged.map(sample_segment);
        let all: Vec<&[Point]> = original_samples
            .iter()
            .chain(&merged_samples)
            .map(|v| v.as_slice())
            .collect();
        let (min, max) = self.extent(&all);
        let mapping = Mapping::new(min, max, style);

        let mut out = String::new();
        writeln!(
            out,
            r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = num(style.width),
            h = num(style.height)
        )
        .unwrap();
        writeln!(
            out,
            r#"  <rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
            num(style.width),
            num(style.height)
        )
        .unwrap();

        if let Some(b) = self.bounds {
            let (x0, y0) = mapping.map(&[b.lower()[0], b.upper()[1]]);
            let (x1, y1) = mapping.map(&[b.upper()[0], b.lower()[1]]);
            writeln!(
                out,
                r#"  <rect id="box" x="{}" y="{}" width="{}" height="{}" {}/>"#,
                num(x0),
                num(y0),
                num(x1 - x0),
                num(y1 - y0),
                style.frame.attributes()
            )
            .unwrap();
        }
        if let (true, Some(orig)) = (self.hull, self.original) {
            let pts: Vec<Point> = orig.control_points().cloned().collect();
            let hull = convex_hull(&pts);
            writeln!(
                out,
                r#"  <path id="hull" d="{}" {}/>"#,
                path(&hull, &mapping, true),
                style.hull.attributes()
            )
            .unwrap();
        }
        if let (Some(orig), Some(samples)) = (self.original, &original_samples) {
            writeln!(out, r#"  <g id="original">"#).unwrap();
            for seg in orig.segments() {
                writeln!(
                    out,
                    r#"    <path d="{}" {}/>"#,
                    path(seg.points(), &mapping, false),
                    style.original_polygon.attributes()
                )
                .unwrap();
            }
            writeln!(
                out,
                r#"    <path d="{}" {}/>"#,
                path(samples, &mapping, false),
                style.original.attributes()
            )
            .unwrap();
            for p in orig.control_points() {
                marker(
                    &mut out,
                    &mapping,
                    p,
                    &style.original.color,
                    style.marker_radius,
                );
            }
            writeln!(out, "  </g>").unwrap();
        }
        if let (Some(seg), Some(samples)) = (self.merged, &merged_samples) {
            writeln!(out, r#"  <g id="merged">"#).unwrap();
            writeln!(
                out,
                r#"    <path d="{}" {}/>"#,
                path(seg.points(), &mapping, false),
                style.merged_polygon.attributes()
            )
            .unwrap();
            writeln!(
                out,
                r#"    <path d="{}" {}/>"#,
                path(samples, &mapping, false),
                style.merged.attributes()
            )
            .unwrap();
            for p in seg.points() {
                marker(
                    &mut out,
                    &mapping,
                    p,
                    &style.merged.color,
                    style.marker_radius,
                );
            }
            writeln!(out, "  </g>").unwrap();
        }
        writeln!(out, "</svg>").unwrap();
        Ok(out)
    }
}

fn marker(out: &mut String, mapping: &Mapping, p: &[f64], color: &str, r: f64) {
    let (x, y) = mapping.map(p);
    writeln!(
        out,
        r#"    <circle cx="{}" cy="{}" r="{}" fill="{color}"/>"#,
        num(x),
        num(y),
        num(r)
    )
    .unwrap();
}
