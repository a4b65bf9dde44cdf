//! Line-oriented text formats for curves and merge results.
//!
//! Curve documents:
//!
//! ```text
//! document  := line*
//! line      := blank | comment | directive
//! comment   := '#' any*                      (also allowed after a directive)
//! directive := 'dimension' INT
//!            | 'partition' REAL+              (all knots, 0 first, 1 last)
//!            | 'frame' ('global' | 'segment')
//!            | 'segment' INT                  (followed by degree + 1 point lines)
//! point     := REAL{dimension}
//! ```
//!
//! `dimension` must come first. Without `partition` the knots follow the arc
//! length of the segments. `frame` is the default continuity frame for merges
//! of this curve.
//!
//! Result documents carry the merge parameters, the errors and the merged
//! control points:
//!
//! ```text
//! dimension 2
//! degree 14
//! continuity 3 1
//! frame segment
//! box none | box REAL{2 d}                 (lower corner, then upper corner)
//! e2 REAL
//! einf REAL
//! iterations INT{d}
//! points
//! REAL{d}                                  (degree + 1 lines)
//! ```
//!
//! Reals are written with Rust's shortest round-trip formatting, so reading
//! a written document reproduces every value bit for bit.

use std::fmt::{self, Write};

use bezmerge::bezier::{BezierSegment, CompositeBezier, Partition, Point};
use bezmerge::merge::{BoxBounds, ContinuityFrame, MergeResult};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveDocument {
    pub dimension: usize,
    /// Full knot vector when given explicitly.
    pub partition: Option<Vec<f64>>,
    pub frame: Option<ContinuityFrame>,
    pub segments: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    column: usize,
    text: &'a str,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    /// Column just past the last character, for "missing value" errors.
    end: usize,
}

impl Line<'_> {
    fn error_at(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn error(&self, token: usize, message: impl Into<String>) -> ParseError {
        let column = self.tokens.get(token).map_or(self.end, |t| t.column);
        self.error_at(column, message)
    }

    fn keyword(&self) -> &str {
        self.tokens[0].text
    }

    fn real(&self, i: usize) -> Result<f64, ParseError> {
        let tok = self
            .tokens
            .get(i)
            .ok_or_else(|| self.error(i, "expected a number"))?;
        let v: f64 = tok
            .text
            .parse()
            .map_err(|_| self.error(i, format!("'{}' is not a number", tok.text)))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.error(i, format!("'{}' is not finite", tok.text)))
        }
    }

    fn int(&self, i: usize) -> Result<usize, ParseError> {
        let tok = self
            .tokens
            .get(i)
            .ok_or_else(|| self.error(i, "expected an integer"))?;
        tok.text
            .parse()
            .map_err(|_| self.error(i, format!("'{}' is not a non-negative integer", tok.text)))
    }

    fn reals_from(&self, start: usize) -> Result<Vec<f64>, ParseError> {
        (start..self.tokens.len()).map(|i| self.real(i)).collect()
    }

    fn expect_len(&self, len: usize, what: &str) -> Result<(), ParseError> {
        if self.tokens.len() == len {
            Ok(())
        } else if self.tokens.len() < len {
            Err(self.error(
                self.tokens.len(),
                format!("{what}: expected {} values", len - 1),
            ))
        } else {
            Err(self.error(len, format!("{what}: unexpected extra value")))
        }
    }

    fn point(&self, dimension: usize) -> Result<Point, ParseError> {
        if self.tokens.len() != dimension {
            let at = self.tokens.len().min(dimension);
            return Err(self.error(
                at,
                format!(
                    "expected {dimension} coordinates, found {}",
                    self.tokens.len()
                ),
            ));
        }
        self.reals_from(0)
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in content
                .char_indices()
                .chain(std::iter::once((content.len(), ' ')))
            {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            column: content[..s].chars().count() + 1,
                            text: &content[s..pos],
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then(|| Line {
                number: i + 1,
                end: content.trim_end().chars().count() + 1,
                tokens,
            })
        })
        .collect()
}

fn end_of_input(text: &str, message: impl Into<String>) -> ParseError {
    ParseError {
        line: text.lines().count().max(1),
        column: text.lines().last().map_or(1, |l| l.chars().count() + 1),
        message: message.into(),
    }
}

fn parse_frame(line: &Line<'_>) -> Result<ContinuityFrame, ParseError> {
    line.expect_len(2, "frame")?;
    match line.tokens[1].text {
        "global" => Ok(ContinuityFrame::Global),
        "segment" => Ok(ContinuityFrame::Segment),
        other => Err(line.error(1, format!("unknown frame '{other}' (global or segment)"))),
    }
}

fn parse_dimension(line: Option<&Line<'_>>, text: &str) -> Result<usize, ParseError> {
    let line = line.ok_or_else(|| end_of_input(text, "empty document"))?;
    if line.keyword() != "dimension" {
        return Err(line.error(0, "document must start with 'dimension'"));
    }
    line.expect_len(2, "dimension")?;
    let d = line.int(1)?;
    if d == 0 {
        return Err(line.error(1, "dimension must be positive"));
    }
    Ok(d)
}

impl CurveDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let lines = lines(text);
        let mut it = lines.iter().peekable();
        let dimension = parse_dimension(it.next(), text)?;
        let mut doc = CurveDocument {
            dimension,
            partition: None,
            frame: None,
            segments: Vec::new(),
        };
        while let Some(line) = it.next() {
            match line.keyword() {
                "partition" => {
                    if doc.partition.is_some() {
                        return Err(line.error(0, "duplicate 'partition'"));
                    }
                    if line.tokens.len() < 3 {
                        return Err(
                            line.error(line.tokens.len(), "partition needs at least two knots")
                        );
                    }
                    doc.partition = Some(line.reals_from(1)?);
                }
                "frame" => {
                    if doc.frame.is_some() {
                        return Err(line.error(0, "duplicate 'frame'"));
                    }
                    doc.frame = Some(parse_frame(line)?);
                }
                "segment" => {
                    line.expect_len(2, "segment")?;
                    let degree = line.int(1)?;
                    let mut points = Vec::with_capacity(degree + 1);
                    for k in 0..=degree {
                        let p = it.next().ok_or_else(|| {
                            end_of_input(
                                text,
                                format!(
                                    "segment {} ends after {k} of {} points",
                                    doc.segments.len() + 1,
                                    degree + 1
                                ),
                            )
                        })?;
                        points.push(p.point(dimension)?);
                    }
                    doc.segments.push(points);
                }
                "dimension" => return Err(line.error(0, "duplicate 'dimension'")),
                other => return Err(line.error(0, format!("unknown directive '{other}'"))),
            }
        }
        if doc.segments.is_empty() {
            return Err(end_of_input(text, "document has no segments"));
        }
        if let Some(knots) = &doc.partition {
            if knots.len() != doc.segments.len() + 1 {
                let line = lines
                    .iter()
                    .find(|l| l.keyword() == "partition")
                    .expect("seen above");
                return Err(line.error(
                    0,
                    format!("{} knots for {} segments", knots.len(), doc.segments.len()),
                ));
            }
        }
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dimension {}", self.dimension).unwrap();
        if let Some(frame) = self.frame {
            writeln!(out, "frame {}", frame_name(frame)).unwrap();
        }
        if let Some(knots) = &self.partition {
            writeln!(out, "partition {}", join(knots)).unwrap();
        }
        for seg in &self.segments {
            writeln!(out, "segment {}", seg.len() - 1).unwrap();
            for p in seg {
                writeln!(out, "{}", join(p)).unwrap();
            }
        }
        out
    }

    /// The composite curve, on the explicit partition or the arc-length one.
    pub fn to_curve(&self) -> bezmerge::Result<CompositeBezier> {
        let segments = self
            .segments
            .iter()
            .map(|pts| BezierSegment::new(pts.clone()))
            .collect::<bezmerge::Result<Vec<_>>>()?;
        match &self.partition {
            Some(knots) => CompositeBezier::new(segments, Partition::new(knots.clone())?),
            None => CompositeBezier::with_arc_length_partition(segments),
        }
    }

    pub fn from_curve(curve: &CompositeBezier, with_partition: bool) -> Self {
        CurveDocument {
            dimension: curve.dim(),
            partition: with_partition.then(|| curve.partition().knots().to_vec()),
            frame: None,
            segments: curve
                .segments()
                .iter()
                .map(|s| s.points().to_vec())
                .collect(),
        }
    }
}

pub fn frame_name(frame: ContinuityFrame) -> &'static str {
    match frame {
        ContinuityFrame::Global => "global",
        ContinuityFrame::Segment => "segment",
    }
}

fn join(values: &[f64]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{v}").unwrap();
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultDocument {
    pub dimension: usize,
    pub degree: usize,
    pub left_order: usize,
    pub right_order: usize,
    pub frame: ContinuityFrame,
    pub bounds: Option<(Vec<f64>, Vec<f64>)>,
    pub e2: f64,
    pub e_inf: f64,
    pub iterations: Vec<usize>,
    pub points: Vec<Point>,
}

impl ResultDocument {
    pub fn from_result(result: &MergeResult) -> Self {
        let spec = &result.spec;
        ResultDocument {
            dimension: result.control_points[0].len(),
            degree: spec.degree,
            left_order: spec.left_order,
            right_order: spec.right_order,
            frame: spec.frame,
            bounds: spec
                .bounds
                .as_ref()
                .map(|b| (b.lower().to_vec(), b.upper().to_vec())),
            e2: result.e2,
            e_inf: result.e_inf,
            iterations: result.iterations(),
            points: result.control_points.clone(),
        }
    }

    pub fn bounds(&self) -> Option<bezmerge::Result<BoxBounds>> {
        self.bounds
            .as_ref()
            .map(|(l, u)| BoxBounds::new(l.clone(), u.clone()))
    }

    pub fn curve(&self) -> bezmerge::Result<BezierSegment> {
        BezierSegment::new(self.points.clone())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "dimension {}", self.dimension).unwrap();
        writeln!(out, "degree {}", self.degree).unwrap();
        writeln!(out, "continuity {} {}", self.left_order, self.right_order).unwrap();
        writeln!(out, "frame {}", frame_name(self.frame)).unwrap();
        match &self.bounds {
            Some((l, u)) => writeln!(out, "box {} {}", join(l), join(u)).unwrap(),
            None => writeln!(out, "box none").unwrap(),
        }
        writeln!(out, "e2 {}", self.e2).unwrap();
        writeln!(out, "einf {}", self.e_inf).unwrap();
        let its: Vec<String> = self.iterations.iter().map(|i| i.to_string()).collect();
        writeln!(out, "iterations {}", its.join(" ")).unwrap();
        writeln!(out, "points").unwrap();
        for p in &self.points {
            writeln!(out, "{}", join(p)).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let lines = lines(text);
        let mut it = lines.iter();
        let dimension = parse_dimension(it.next(), text)?;
        let mut next = |keyword: &str| -> Result<&Line<'_>, ParseError> {
            let line = it
                .next()
                .ok_or_else(|| end_of_input(text, format!("expected '{keyword}'")))?;
            if line.keyword() != keyword {
                return Err(line.error(
                    0,
                    format!("expected '{keyword}', found '{}'", line.keyword()),
                ));
            }
            Ok(line)
        };
        let line = next("degree")?;
        line.expect_len(2, "degree")?;
        let degree = line.int(1)?;
        let line = next("continuity")?;
        line.expect_len(3, "continuity")?;
        let (left_order, right_order) = (line.int(1)?, line.int(2)?);
        let frame = parse_frame(next("frame")?)?;
        let line = next("box")?;
        let bounds = if line.tokens.len() == 2 && line.tokens[1].text == "none" {
            None
        } else {
            line.expect_len(1 + 2 * dimension, "box")?;
            let v = line.reals_from(1)?;
            Some((v[..dimension].to_vec(), v[dimension..].to_vec()))
        };
        let line = next("e2")?;
        line.expect_len(2, "e2")?;
        let e2 = line.real(1)?;
        let line = next("einf")?;
        line.expect_len(2, "einf")?;
        let e_inf = line.real(1)?;
        let line = next("iterations")?;
        line.expect_len(1 + dimension, "iterations")?;
        let iterations = (1..=dimension)
            .map(|i| line.int(i))
            .collect::<Result<Vec<_>, _>>()?;
        let line = next("points")?;
        line.expect_len(1, "points")?;
        let mut points = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            let p = it.next().ok_or_else(|| {
                end_of_input(text, format!("points end after {k} of {}", degree + 1))
            })?;
            points.push(p.point(dimension)?);
        }
        if let Some(extra) = it.next() {
            return Err(extra.error(0, "unexpected content after the last point"));
        }
        Ok(ResultDocument {
            dimension,
            degree,
            left_order,
            right_order,
            frame,
            bounds,
            e2,
            e_inf,
            iterations,
            points,
        })
    }
}

impl fmt::Display for CurveDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
