use bezmerge::bernstein::{bernstein_basis, forward_difference, gramian};
use bezmerge::matrix::Cholesky;
use bezmerge::quadrature::GaussLegendre;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn partition_of_unity() {
    let mut rng = StdRng::seed_from_u64(7);
    for m in 0..=30 {
        for _ in 0..100 {
            let t: f64 = rng.gen();
            let b = bernstein_basis(m, t).unwrap();
            assert!(b.iter().all(|&v| v >= 0.0));
            assert!(
                (b.iter().sum::<f64>() - 1.0).abs() <= 1e-12,
                "m = {m}, t = {t}"
            );
        }
    }
}

#[test]
fn gramian_transpose_symmetry() {
    for m in 0..=25 {
        for n in 0..=25 {
            let g = gramian(m, n).unwrap().matrix;
            let h = gramian(n, m).unwrap().matrix;
            assert!(g.transpose().max_abs_diff(&h) <= 1e-15, "m = {m}, n = {n}");
            assert!(g.as_slice().iter().all(|&v| v > 0.0));
        }
    }
}

#[test]
fn gramian_matches_quadrature() {
    // 10 nodes integrate degree 19 exactly; m + n ≤ 16 here.
    let rule = GaussLegendre::new(10);
    for m in 0..=8 {
        for n in 0..=8 {
            let g = gramian(m, n).unwrap().matrix;
            for i in 0..=m {
                for j in 0..=n {
                    let q = rule.integrate(
                        |t| bernstein_basis(m, t).unwrap()[i] * bernstein_basis(n, t).unwrap()[j],
                        0.0,
                        1.0,
                    );
                    assert!((g[(i, j)] - q).abs() <= 1e-12, "g[{i}][{j}] of G_{m},{n}");
                }
            }
        }
    }
}

#[test]
fn square_gramian_is_positive_definite() {
    for m in 0..=20 {
        let g = gramian(m, m).unwrap().matrix;
        let chol = Cholesky::factor(&g).unwrap_or_else(|e| panic!("m = {m}: {e}"));
        assert!(chol.pivots().iter().all(|&p| p > 0.0));
    }
}

proptest! {
    #[test]
    fn forward_difference_is_linear(
        q in prop::collection::vec(-10.0f64..10.0, 1..12),
        w_seed in prop::collection::vec(-10.0f64..10.0, 12),
        alpha in -5.0f64..5.0,
        beta in -5.0f64..5.0,
        order in 0usize..12,
    ) {
        let j = order % q.len();
        let w = &w_seed[..q.len()];
        let mixed: Vec<f64> = q.iter().zip(w).map(|(a, b)| alpha * a + beta * b).collect();
        let lhs = forward_difference(&mixed, j).unwrap();
        let rhs = alpha * forward_difference(&q, j).unwrap() + beta * forward_difference(w, j).unwrap();
        // scale grows like 2^j times the data magnitude
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs())) * 1e2);
    }
}
