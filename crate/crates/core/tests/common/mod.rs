#![allow(dead_code)]

use bezmerge::bezier::{BezierSegment, CompositeBezier, Partition};
use bezmerge::merge::BoxBounds;

pub fn segment(points: &[[f64; 2]]) -> BezierSegment {
    BezierSegment::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
}

pub fn ampersand_segments() -> Vec<BezierSegment> {
    vec![
        segment(&[
            [0.49, 0.07],
            [0.43, 0.22],
            [0.08, 0.67],
            [0.0, 0.97],
            [0.29, 0.98],
            [0.36, 0.9],
        ]),
        segment(&[
            [0.36, 0.9],
            [0.43, 0.84],
            [0.43, 0.68],
            [0.25, 0.58],
            [0.1, 0.36],
            [0.09, 0.23],
        ]),
        segment(&[
            [0.09, 0.23],
            [0.08, 0.13],
            [0.14, 0.06],
            [0.34, 0.0],
            [0.52, 0.08],
            [0.48, 0.23],
        ]),
    ]
}

/// Ampersand on its stated partition `0, 0.45, 0.76, 1`.
pub fn ampersand() -> CompositeBezier {
    CompositeBezier::new(
        ampersand_segments(),
        Partition::new(vec![0.0, 0.45, 0.76, 1.0]).unwrap(),
    )
    .unwrap()
}

pub fn d_segments() -> Vec<BezierSegment> {
    vec![
        segment(&[[0.32, 0.81], [0.26, 0.59], [0.18, 0.0], [0.06, 0.27]]),
        segment(&[[0.06, 0.27], [0.0, 0.42], [0.42, 0.08], [0.57, 0.25]]),
        segment(&[[0.57, 0.25], [0.76, 0.46], [0.8, 1.0], [0.22, 0.85]]),
    ]
}

/// "D" curve on its arc-length partition.
pub fn d_curve() -> CompositeBezier {
    CompositeBezier::with_arc_length_partition(d_segments()).unwrap()
}

pub fn bounds(lower: [f64; 2], upper: [f64; 2]) -> BoxBounds {
    BoxBounds::new(lower.to_vec(), upper.to_vec()).unwrap()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}
