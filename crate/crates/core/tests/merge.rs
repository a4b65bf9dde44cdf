mod common;

use bezmerge::bezier::{BezierSegment, CompositeBezier, Partition};
use bezmerge::merge::{
    error_linf, expand_box, fixed_endpoint_points, merge_boxed, merge_traditional, suggest_box,
    BoxBounds, ContinuityFrame, FaceRule, FaceSelection, MergeResult, MergeSpec,
};
use bezmerge::quadrature::GaussLegendre;
use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `∫ ‖P - R‖²` by a Gauss–Legendre rule per knot interval; 40 nodes are
/// exact for the polynomial integrands of every case here (degree ≤ 79).
fn squared_error_by_quadrature(curve: &CompositeBezier, result: &MergeResult) -> f64 {
    let r = result.curve();
    assert!(2 * r.degree().max(curve.max_degree()) < 80);
    let rule = GaussLegendre::new(40);
    curve
        .partition()
        .intervals()
        .map(|(a, b)| {
            rule.integrate(
                |t| {
                    let p = curve.evaluate(t);
                    let q = r.evaluate(t);
                    p.iter().zip(&q).map(|(x, y)| (x - y).powi(2)).sum()
                },
                a,
                b,
            )
        })
        .sum()
}

/// Derivative of order `i` of the merged curve and the reference value it
/// must match at one end, for the given frame.
fn end_derivatives(
    curve: &CompositeBezier,
    r: &BezierSegment,
    i: usize,
    at_end: bool,
    frame: ContinuityFrame,
) -> (Vec<f64>, Vec<f64>) {
    let u = if at_end { 1.0 } else { 0.0 };
    let got = r.derivative_of_order(i).evaluate(u);
    let want = match frame {
        ContinuityFrame::Global => curve.endpoint_derivative(i, at_end),
        ContinuityFrame::Segment => {
            let seg = if at_end {
                curve.last_segment()
            } else {
                curve.first_segment()
            };
            seg.derivative_of_order(i).evaluate(u)
        }
    };
    (got, want)
}

fn assert_continuity(curve: &CompositeBezier, result: &MergeResult) {
    let r = result.curve();
    let spec = &result.spec;
    let check = |i: usize, at_end: bool| {
        let (got, want) = end_derivatives(curve, &r, i, at_end, spec.frame);
        let scale = want.iter().map(|v| v.abs()).fold(1.0, f64::max);
        for (g, w) in got.iter().zip(&want) {
            assert!(
                (g - w).abs() <= 1e-6 * scale,
                "order {i} at {}: {got:?} vs {want:?}",
                if at_end { 1 } else { 0 }
            );
        }
    };
    for i in 0..spec.left_order {
        check(i, false);
    }
    for i in 0..spec.right_order {
        check(i, true);
    }
}

fn random_composite(rng: &mut StdRng, dim: usize) -> CompositeBezier {
    let s = rng.gen_range(1..=4);
    let mut segments = Vec::new();
    let mut start: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for _ in 0..s {
        let n = rng.gen_range(1..=5);
        let mut points = vec![start.clone()];
        for _ in 0..n {
            points.push((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
        }
        start = points.last().unwrap().clone();
        segments.push(BezierSegment::new(points).unwrap());
    }
    let mut interior: Vec<f64> = (1..s)
        .map(|i| i as f64 / s as f64 + rng.gen_range(-0.05..0.05))
        .collect();
    interior.sort_by(|a, b| a.partial_cmp(b).unwrap());
    CompositeBezier::new(segments, Partition::from_interior(&interior).unwrap()).unwrap()
}

fn random_spec(rng: &mut StdRng, curve: &CompositeBezier) -> MergeSpec {
    let n1 = curve.first_segment().degree();
    let ns = curve.last_segment().degree();
    let m = curve.max_degree() + rng.gen_range(2..=8);
    let k = rng.gen_range(0..=(n1 + 1).min(3));
    let l = rng.gen_range(0..=(ns + 1).min(3));
    MergeSpec::new(m, k, l)
}

#[test]
fn ampersand_traditional_matches_published_errors() {
    let spec = MergeSpec::new(14, 3, 1).with_frame(ContinuityFrame::Segment);
    let r = merge_traditional(&ampersand(), &spec).unwrap();
    assert!(rel_err(r.e2, 5.49e-3) <= 0.02, "E2 = {:e}", r.e2);
    assert!(rel_err(r.e_inf, 2.28e-2) <= 0.02, "Einf = {:e}", r.e_inf);
}

#[test]
fn ampersand_boxed_matches_published_errors() {
    let spec = MergeSpec::new(14, 3, 1)
        .with_frame(ContinuityFrame::Segment)
        .with_box(bounds([-0.17, 0.0], [0.73, 1.15]));
    let r = merge_boxed(&ampersand(), &spec).unwrap();
    assert!(rel_err(r.e2, 1.85e-2) <= 0.02, "E2 = {:e}", r.e2);
    assert!(rel_err(r.e_inf, 6.10e-2) <= 0.02, "Einf = {:e}", r.e_inf);
}

#[test]
fn d_curve_table() {
    let c = d_curve();
    let spec = MergeSpec::new(18, 1, 2).with_frame(ContinuityFrame::Segment);
    let t = merge_traditional(&c, &spec).unwrap();
    assert!(rel_err(t.e2, 3.35e-3) <= 0.02, "E2 = {:e}", t.e2);
    assert!(rel_err(t.e_inf, 9.57e-3) <= 0.02, "Einf = {:e}", t.e_inf);

    let b1 = suggest_box(
        &c,
        0.0,
        None,
        &FaceRule::Explicit(FaceSelection::lower_faces(2)),
    )
    .unwrap();
    let b2 = expand_box(&b1, 0.04, &FaceSelection::lower_faces(2)).unwrap();
    let b3 = expand_box(&b2, 0.08, &FaceSelection::lower_faces(2)).unwrap();
    let res1 = bounds([-0.2, -0.3], [0.8, 1.0]);
    let published = [
        (2.25e-2, 5.54e-2),
        (1.86e-2, 4.14e-2),
        (1.51e-2, 3.30e-2),
        (1.38e-2, 2.98e-2),
    ];
    let mut last = f64::INFINITY;
    for (b, (e2, einf)) in [b1, b2, b3, res1].into_iter().zip(published) {
        let r = merge_boxed(&c, &spec.clone().with_box(b.clone())).unwrap();
        assert!(rel_err(r.e2, e2) <= 0.02, "{b:?}: E2 = {:e}", r.e2);
        assert!(
            rel_err(r.e_inf, einf) <= 0.02,
            "{b:?}: Einf = {:e}",
            r.e_inf
        );
        assert!(r.e2 <= last && r.e2 >= t.e2);
        last = r.e2;
    }
}

#[test]
fn d_curve_box_suggestions() {
    let c = d_curve();
    let b1 = suggest_box(
        &c,
        0.04,
        None,
        &FaceRule::Explicit(FaceSelection::lower_faces(2)),
    )
    .unwrap();
    assert_eq!(b1.lower(), &[0.0, 0.0]);
    assert_eq!(b1.upper(), &[0.8, 1.0]);
    let rule =
        FaceRule::MostOccupied(MergeSpec::new(18, 1, 2).with_frame(ContinuityFrame::Segment));
    let b2 = suggest_box(&c, 0.04, Some(&b1), &rule).unwrap();
    for &v in b2.lower() {
        assert!((v + 0.05).abs() <= 0.0025, "{b2:?}");
    }
    assert_eq!(b2.upper(), b1.upper());
    let b3 = suggest_box(&c, 0.08, Some(&b2), &rule).unwrap();
    for &v in b3.lower() {
        assert!((v + 0.16).abs() <= 0.005, "{b3:?}");
    }
    assert!(b3.encloses(&b2) && b2.encloses(&b1));
}

#[test]
fn continuity_holds_in_both_frames() {
    let mut rng = StdRng::seed_from_u64(41);
    for frame in [ContinuityFrame::Global, ContinuityFrame::Segment] {
        assert_continuity(
            &ampersand(),
            &merge_traditional(&ampersand(), &MergeSpec::new(14, 3, 1).with_frame(frame)).unwrap(),
        );
        assert_continuity(
            &d_curve(),
            &merge_traditional(&d_curve(), &MergeSpec::new(18, 1, 2).with_frame(frame)).unwrap(),
        );
        for _ in 0..20 {
            let c = random_composite(&mut rng, 2);
            let spec = random_spec(&mut rng, &c).with_frame(frame);
            assert_continuity(&c, &merge_traditional(&c, &spec).unwrap());
            let boxed = spec.with_box(BoxBounds::around_control_points(&c));
            assert_continuity(&c, &merge_boxed(&c, &boxed).unwrap());
        }
    }
}

#[test]
fn fixed_points_reproduce_derivatives_numerically() {
    // two segments, Δt₀ = 0.5, left order 2 at degree 6
    let c = CompositeBezier::new(
        vec![
            BezierSegment::new(vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.5, 1.0],
                vec![2.0, 1.0],
            ])
            .unwrap(),
            BezierSegment::new(vec![vec![2.0, 1.0], vec![2.5, 1.0], vec![3.0, 0.0]]).unwrap(),
        ],
        Partition::new(vec![0.0, 0.5, 1.0]).unwrap(),
    )
    .unwrap();
    let fixed = fixed_endpoint_points(&c, &MergeSpec::new(6, 2, 0)).unwrap();
    assert_eq!(fixed.indices, vec![0, 1]);
    assert!((fixed.values[1][0] - 1.0).abs() <= 1e-15 && fixed.values[1][1].abs() <= 1e-15);

    let r = merge_traditional(&c, &MergeSpec::new(6, 2, 0))
        .unwrap()
        .curve();
    let h = 1e-6;
    for dim in 0..2 {
        let rd = (r.evaluate(h)[dim] - r.evaluate(0.0)[dim]) / h;
        let pd = (c.evaluate(h)[dim] - c.evaluate(0.0)[dim]) / h;
        assert!((rd - pd).abs() <= 1e-4, "{rd} vs {pd}");
    }
}

#[test]
fn boxed_points_stay_inside() {
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..30 {
        let c = random_composite(&mut rng, 2);
        let spec = random_spec(&mut rng, &c);
        let full = BoxBounds::around_control_points(&c);
        // shrink toward the center so that bounds become active
        let shrink = rng.gen_range(0.0..0.4);
        let lower: Vec<f64> = full
            .lower()
            .iter()
            .zip(full.upper())
            .map(|(l, u)| l + shrink * (u - l))
            .collect();
        let upper: Vec<f64> = full
            .lower()
            .iter()
            .zip(full.upper())
            .map(|(l, u)| u - shrink * (u - l))
            .collect();
        let b = BoxBounds::new(lower, upper).unwrap();
        let r = merge_boxed(&c, &spec.clone().with_box(b.clone())).unwrap();
        for j in spec.free_indices() {
            assert!(
                b.contains(&r.control_points[j]),
                "r_{j} = {:?} outside {b:?}",
                r.control_points[j]
            );
        }
        for (h, report) in r.coordinates.iter().enumerate() {
            for &j in &report.active_lower {
                assert_eq!(r.control_points[j][h], b.lower()[h]);
            }
            for &j in &report.active_upper {
                assert_eq!(r.control_points[j][h], b.upper()[h]);
            }
            assert!(report.kkt_residual <= spec.tol);
        }
    }
}

#[test]
fn traditional_dominates_and_enlarging_helps() {
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..15 {
        let c = random_composite(&mut rng, 2);
        let spec = random_spec(&mut rng, &c);
        let t = merge_traditional(&c, &spec).unwrap();
        let mut b = BoxBounds::around_control_points(&c);
        let mut last = f64::INFINITY;
        for _ in 0..4 {
            let r = merge_boxed(&c, &spec.clone().with_box(b.clone())).unwrap();
            assert!(r.squared_error() >= t.squared_error() - 1e-12);
            assert!(r.squared_error() <= last + 1e-12);
            last = r.squared_error();
            b = expand_box(&b, rng.gen_range(0.0..0.3), &FaceSelection::all_faces(2)).unwrap();
        }
    }
}

#[test]
fn loose_box_reproduces_traditional() {
    let spec = MergeSpec::new(14, 3, 1).with_frame(ContinuityFrame::Segment);
    let t = merge_traditional(&ampersand(), &spec).unwrap();
    let huge = bounds([-1e4, -1e4], [1e4, 1e4]);
    let b = merge_boxed(&ampersand(), &spec.with_box(huge)).unwrap();
    for (p, q) in t.control_points.iter().zip(&b.control_points) {
        for (x, y) in p.iter().zip(q) {
            assert!((x - y).abs() <= 1e-8);
        }
    }
}

#[test]
fn exact_error_matches_quadrature() {
    let mut rng = StdRng::seed_from_u64(44);
    let mut cases: Vec<(CompositeBezier, MergeSpec)> = vec![
        (ampersand(), MergeSpec::new(14, 3, 1)),
        (
            ampersand(),
            MergeSpec::new(14, 3, 1).with_frame(ContinuityFrame::Segment),
        ),
        (
            ampersand(),
            MergeSpec::new(14, 3, 1).with_box(bounds([-0.17, 0.0], [0.73, 1.15])),
        ),
        (d_curve(), MergeSpec::new(18, 1, 2)),
        (
            d_curve(),
            MergeSpec::new(18, 1, 2).with_box(bounds([-0.2, -0.3], [0.8, 1.0])),
        ),
    ];
    for _ in 0..20 {
        let c = random_composite(&mut rng, 2);
        let spec = random_spec(&mut rng, &c);
        cases.push((c, spec));
    }
    for (c, spec) in cases {
        let r = if spec.bounds.is_some() {
            merge_boxed(&c, &spec)
        } else {
            merge_traditional(&c, &spec)
        }
        .unwrap();
        let quad = squared_error_by_quadrature(&c, &r);
        let objective: f64 = r.coordinates.iter().map(|c| c.objective).sum();
        assert!(
            (objective - quad).abs() <= 1e-9,
            "objective {objective:e} vs quadrature {quad:e}"
        );
        assert!(
            (r.squared_error() - quad).abs() <= 1e-9,
            "exact {:e} vs quadrature {quad:e}",
            r.squared_error()
        );
    }
}

#[test]
fn coordinates_merge_independently() {
    let mut rng = StdRng::seed_from_u64(45);
    for _ in 0..10 {
        let c = random_composite(&mut rng, 3);
        let spec = random_spec(&mut rng, &c);
        let full = merge_traditional(&c, &spec).unwrap();
        let boxed_full = merge_boxed(
            &c,
            &spec.clone().with_box(BoxBounds::around_control_points(&c)),
        )
        .unwrap();
        for h in 0..3 {
            let single = CompositeBezier::new(
                c.segments()
                    .iter()
                    .map(|s| {
                        BezierSegment::new(s.points().iter().map(|p| vec![p[h]]).collect()).unwrap()
                    })
                    .collect(),
                c.partition().clone(),
            )
            .unwrap();
            let part = merge_traditional(&single, &spec).unwrap();
            let b1 = BoxBounds::around_control_points(&single);
            let boxed = merge_boxed(&single, &spec.clone().with_box(b1)).unwrap();
            for j in 0..=spec.degree {
                assert!((part.control_points[j][0] - full.control_points[j][h]).abs() <= 1e-12);
                assert!(
                    (boxed.control_points[j][0] - boxed_full.control_points[j][h]).abs() <= 1e-12
                );
            }
        }
        // permuting coordinates permutes the result
        let permuted = CompositeBezier::new(
            c.segments()
                .iter()
                .map(|s| {
                    BezierSegment::new(s.points().iter().map(|p| vec![p[2], p[0], p[1]]).collect())
                        .unwrap()
                })
                .collect(),
            c.partition().clone(),
        )
        .unwrap();
        let perm = merge_traditional(&permuted, &spec).unwrap();
        for (p, q) in perm.control_points.iter().zip(&full.control_points) {
            assert_eq!(p, &vec![q[2], q[0], q[1]]);
        }
    }
}

#[test]
fn degree_elevation_is_exact() {
    let mut rng = StdRng::seed_from_u64(46);
    for _ in 0..20 {
        let n = rng.gen_range(0..=8);
        let seg = BezierSegment::new(
            (0..=n)
                .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
                .collect(),
        )
        .unwrap();
        let c = CompositeBezier::new(vec![seg.clone()], Partition::uniform(1).unwrap()).unwrap();
        let m = n + rng.gen_range(0..=6);
        let r = merge_traditional(&c, &MergeSpec::new(m, 0, 0)).unwrap();
        assert!(r.e2 <= 1e-10, "n = {n}, m = {m}: E2 = {:e}", r.e2);
        if m == n {
            for (p, q) in r.control_points.iter().zip(seg.points()) {
                assert!((p[0] - q[0]).abs() <= 1e-10 && (p[1] - q[1]).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn sampled_error_examples() {
    let seg = BezierSegment::new(vec![vec![0.3, 0.4]]).unwrap();
    let c = CompositeBezier::new(vec![seg], Partition::uniform(1).unwrap()).unwrap();
    assert!((error_linf(&c, &[vec![0.4, 0.4]], 500) - 0.1).abs() <= 1e-15);
    assert!(error_linf(&c, &[vec![0.3, 0.4], vec![0.3, 0.4]], 500) <= 1e-15);
}
