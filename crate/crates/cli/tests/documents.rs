use bezmerge::merge::ContinuityFrame;
use bezmerge_cli::document::{CurveDocument, ResultDocument};
use proptest::prelude::*;

fn real() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e3f64..1e3,
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        Just(0.0),
        Just(-0.0),
    ]
}

fn curve_document() -> impl Strategy<Value = CurveDocument> {
    (
        1usize..4,
        1usize..5,
        any::<bool>(),
        prop::option::of(any::<bool>()),
    )
        .prop_flat_map(|(dim, segments, with_partition, frame)| {
            let segs = prop::collection::vec(
                (0usize..6).prop_flat_map(move |deg| {
                    prop::collection::vec(prop::collection::vec(real(), dim), deg + 1)
                }),
                segments,
            );
            let knots = prop::collection::vec(0.0f64..1.0, segments + 1);
            (segs, knots).prop_map(move |(segments, knots)| CurveDocument {
                dimension: dim,
                partition: with_partition.then_some(knots),
                frame: frame.map(|g| {
                    if g {
                        ContinuityFrame::Global
                    } else {
                        ContinuityFrame::Segment
                    }
                }),
                segments,
            })
        })
}

fn result_document() -> impl Strategy<Value = ResultDocument> {
    (1usize..4, 0usize..12).prop_flat_map(|(dim, degree)| {
        (
            prop::collection::vec(prop::collection::vec(real(), dim), degree + 1),
            prop::option::of((
                prop::collection::vec(real(), dim),
                prop::collection::vec(real(), dim),
            )),
            real(),
            real(),
            prop::collection::vec(0usize..10_000, dim),
            (0usize..4, 0usize..4, any::<bool>()),
        )
            .prop_map(move |(points, bounds, e2, e_inf, iterations, (k, l, g))| {
                ResultDocument {
                    dimension: dim,
                    degree,
                    left_order: k,
                    right_order: l,
                    frame: if g {
                        ContinuityFrame::Global
                    } else {
                        ContinuityFrame::Segment
                    },
                    bounds,
                    e2,
                    e_inf,
                    iterations,
                    points,
                }
            })
    })
}

fn same_bits(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

proptest! {
    #[test]
    fn curve_documents_round_trip(doc in curve_document()) {
        let back = CurveDocument::parse(&doc.to_text()).unwrap();
        prop_assert_eq!(back.dimension, doc.dimension);
        prop_assert_eq!(back.frame, doc.frame);
        prop_assert_eq!(back.partition.is_some(), doc.partition.is_some());
        if let (Some(a), Some(b)) = (&back.partition, &doc.partition) {
            prop_assert!(same_bits(a, b));
        }
        prop_assert_eq!(back.segments.len(), doc.segments.len());
        for (s, t) in back.segments.iter().zip(&doc.segments) {
            prop_assert_eq!(s.len(), t.len());
            for (p, q) in s.iter().zip(t) {
                prop_assert!(same_bits(p, q));
            }
        }
    }

    #[test]
    fn result_documents_round_trip(doc in result_document()) {
        let back = ResultDocument::parse(&doc.to_text()).unwrap();
        prop_assert_eq!(back.e2.to_bits(), doc.e2.to_bits());
        prop_assert_eq!(back.e_inf.to_bits(), doc.e_inf.to_bits());
        prop_assert_eq!(&back.iterations, &doc.iterations);
        prop_assert_eq!((back.degree, back.left_order, back.right_order, back.frame), (doc.degree, doc.left_order, doc.right_order, doc.frame));
        for (p, q) in back.points.iter().zip(&doc.points) {
            prop_assert!(same_bits(p, q));
        }
        match (&back.bounds, &doc.bounds) {
            (Some((a, b)), Some((c, d))) => prop_assert!(same_bits(a, c) && same_bits(b, d)),
            (None, None) => {}
            _ => prop_assert!(false, "box lost"),
        }
    }

    #[test]
    fn ragged_points_are_rejected(dim in 2usize..4, short in 1usize..2) {
        let mut text = format!("dimension {dim}\nsegment 1\n");
        text.push_str(&vec!["0"; dim].join(" "));
        text.push('\n');
        text.push_str(&vec!["1"; dim - short].join(" "));
        text.push('\n');
        let err = CurveDocument::parse(&text).unwrap_err();
        prop_assert_eq!(err.line, 4);
    }
}

#[test]
fn fixtures_round_trip() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for name in ["ampersand.bez", "d_curve.bez"] {
        let doc = CurveDocument::parse(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap();
        assert_eq!(CurveDocument::parse(&doc.to_text()).unwrap(), doc);
        assert_eq!(doc.frame, Some(ContinuityFrame::Segment));
    }
}
