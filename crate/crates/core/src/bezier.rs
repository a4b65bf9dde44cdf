//! Bézier segments, composite curves and their parameter partitions.

use log::warn;

use crate::quadrature::Adaptive;
use crate::{Error, Result};

/// A point in `R^d`.
pub type Point = Vec<f64>;

/// Maximum allowed gap at a join before a warning is logged.
pub const JOIN_TOLERANCE: f64 = 1e-9;

/// A single Bézier curve of degree `n` with `n + 1` control points in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierSegment {
    points: Vec<Point>,
}

impl BezierSegment {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidSegment("no control points".into()))?;
        if dim == 0 {
            return Err(Error::InvalidSegment("points of dimension 0".into()));
        }
        if let Some(j) = points.iter().position(|p| p.len() != dim) {
            return Err(Error::InvalidSegment(format!(
                "control point {j} has dimension {}, expected {dim}",
                points[j].len()
            )));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSegment("non-finite coordinate".into()));
        }
        Ok(BezierSegment { points })
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        &self.points[self.points.len() - 1]
    }

    /// Control values of coordinate `h`.
    pub fn coordinate(&self, h: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[h]).collect()
    }

    /// Point at local parameter `u` by de Casteljau's algorithm.
    pub fn evaluate(&self, u: f64) -> Point {
        let mut work = self.points.clone();
        let s = 1.0 - u;
        for level in (1..work.len()).rev() {
            for j in 0..level {
                let (lo, hi) = work.split_at_mut(j + 1);
                for (a, &b) in lo[j].iter_mut().zip(&hi[0]) {
                    *a = s * *a + u * b;
                }
            }
        }
        work.swap_remove(0)
    }

    /// The hodograph: control points `n (p_{j+1} - p_j)`.
    pub fn derivative(&self) -> Result<BezierSegment> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::InvalidSegment(
                "derivative of a degree-0 segment".into(),
            ));
        }
        let nf = n as f64;
        let points = self
            .points
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).map(|(a, b)| nf * (b - a)).collect())
            .collect();
        Ok(BezierSegment { points })
    }

    /// The `order`-th derivative as a Bézier segment; a zero constant once the
    /// order exceeds the degree.
    pub fn derivative_of_order(&self, order: usize) -> BezierSegment {
        let mut seg = self.clone();
        for _ in 0..order {
            seg = match seg.derivative() {
                Ok(d) => d,
                Err(_) => {
                    return BezierSegment {
                        points: vec![vec![0.0; self.dim()]],
                    }
                }
            };
        }
        seg
    }

    /// Euclidean length of the segment, by adaptive quadrature of its speed.
    pub fn length(&self, quadrature: &Adaptive) -> Result<f64> {
        let hodograph = self.derivative()?;
        Ok(quadrature.integrate(|u| norm(&hodograph.evaluate(u)), 0.0, 1.0))
    }
}

pub fn norm(p: &[f64]) -> f64 {
    p.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Knots `0 = t_0 < t_1 < ... < t_s = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidPartition("fewer than two knots".into()));
        }
        if knots[0] != 0.0 || knots[knots.len() - 1] != 1.0 {
            return Err(Error::InvalidPartition(
                "must start at 0 and end at 1".into(),
            ));
        }
        if knots.iter().any(|k| !k.is_finite()) || knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition(
                "knots are not strictly increasing".into(),
            ));
        }
        Ok(Partition { knots })
    }

    /// A partition from its interior knots `t_1, ..., t_{s-1}`.
    pub fn from_interior(interior: &[f64]) -> Result<Self> {
        let mut knots = Vec::with_capacity(interior.len() + 2);
        knots.push(0.0);
        knots.extend_from_slice(interior);
        knots.push(1.0);
        Self::new(knots)
    }

    pub fn uniform(segments: usize) -> Result<Self> {
        if segments == 0 {
            return Err(Error::InvalidPartition("zero segments".into()));
        }
        let mut knots: Vec<f64> = (0..segments).map(|i| i as f64 / segments as f64).collect();
        knots.push(1.0);
        Self::new(knots)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn segment_count(&self) -> usize {
        self.knots.len() - 1
    }

    /// `(t_{i-1}, t_i)` for the zero-based segment `i`.
    pub fn interval(&self, i: usize) -> (f64, f64) {
        (self.knots[i], self.knots[i + 1])
    }

    pub fn width(&self, i: usize) -> f64 {
        self.knots[i + 1] - self.knots[i]
    }

    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.knots.windows(2).map(|w| (w[0], w[1]))
    }

    /// Zero-based segment containing `t`; an interior knot belongs to the segment on its left.
    pub fn locate(&self, t: f64) -> usize {
        let inner = &self.knots[1..];
        inner.partition_point(|&k| k < t).min(inner.len() - 1)
    }
}

/// `t_j = L_j / L_s` where `L_j` is the summed length of the first `j` segments.
pub fn arc_length_partition(segments: &[BezierSegment]) -> Result<Partition> {
    if segments.is_empty() {
        return Err(Error::InvalidPartition("no segments".into()));
    }
    let quadrature = Adaptive::default();
    let mut cumulative = Vec::with_capacity(segments.len() + 1);
    cumulative.push(0.0);
    let mut total = 0.0;
    for seg in segments {
        total += seg.length(&quadrature)?;
        cumulative.push(total);
    }
    if total <= 0.0 {
        return Err(Error::ZeroLength);
    }
    let last = cumulative.len() - 1;
    let knots = cumulative
        .iter()
        .enumerate()
        .map(|(j, &l)| if j == last { 1.0 } else { l / total })
        .collect();
    Partition::new(knots)
}

/// A piecewise curve whose segment `i` is reparametrized onto `[t_{i-1}, t_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeBezier {
    segments: Vec<BezierSegment>,
    partition: Partition,
}

impl CompositeBezier {
    pub fn new(segments: Vec<BezierSegment>, partition: Partition) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSegment(
                "composite curve without segments".into(),
            ));
        }
        if partition.segment_count() != segments.len() {
            return Err(Error::InvalidPartition(format!(
                "{} knots for {} segments",
                partition.knots().len(),
                segments.len()
            )));
        }
        let dim = segments[0].dim();
        if let Some(i) = segments.iter().position(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "segment {i} has dimension {}, expected {dim}",
                segments[i].dim()
            )));
        }
        for (i, pair) in segments.windows(2).enumerate() {
            let gap = distance(pair[0].last(), pair[1].first());
            if gap > JOIN_TOLERANCE {
                warn!("segments {i} and {} do not join (gap {gap:e})", i + 1);
            }
        }
        Ok(CompositeBezier {
            segments,
            partition,
        })
    }

    pub fn with_arc_length_partition(segments: Vec<BezierSegment>) -> Result<Self> {
        let partition = arc_length_partition(&segments)?;
        Self::new(segments, partition)
    }

    pub fn segments(&self) -> &[BezierSegment] {
        &self.segments
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn dim(&self) -> usize {
        self.segments[0].dim()
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    pub fn max_degree(&self) -> usize {
        self.segments
            .iter()
            .map(BezierSegment::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn first_segment(&self) -> &BezierSegment {
        &self.segments[0]
    }

    pub fn last_segment(&self) -> &BezierSegment {
        &self.segments[self.segments.len() - 1]
    }

    pub fn control_points(&self) -> impl Iterator<Item = &Point> {
        self.segments.iter().flat_map(|s| s.points().iter())
    }

    /// Same segments on a different partition.
    pub fn with_partition(&self, partition: Partition) -> Result<Self> {
        Self::new(self.segments.clone(), partition)
    }

    pub fn evaluate(&self, t: f64) -> Point {
        let i = self.partition.locate(t);
        let (a, b) = self.partition.interval(i);
        let u = ((t - a) / (b - a)).clamp(0.0, 1.0);
        self.segments[i].evaluate(u)
    }

    /// Derivative of order `order` at `t = 0` or `t = 1`, with respect to the global parameter.
    pub fn endpoint_derivative(&self, order: usize, at_end: bool) -> Point {
        let (seg, width, u) = if at_end {
            (
                self.last_segment(),
                self.partition.width(self.segment_count() - 1),
                1.0,
            )
        } else {
            (self.first_segment(), self.partition.width(0), 0.0)
        };
        let scale = width.powi(-(order as i32));
        seg.derivative_of_order(order)
            .evaluate(u)
            .into_iter()
            .map(|v| v * scale)
            .collect()
    }
}
