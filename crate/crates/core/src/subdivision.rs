//! Subdivision matrices of a degree-`m` Bézier curve.
//!
//! For a sub-interval `[a, b] ⊂ [0, 1]` the matrix `D` maps the control points
//! `r` of `R` to the control points of `R` restricted to `[a, b]` and
//! reparametrized to `[0, 1]`, so `R(a + u (b - a)) = b_{m,u} D r`.
//!
//! Two constructions are provided: the product `A₁(a/b) A₂(b)` of two
//! triangular de Casteljau matrices, costing `O(m³)`, and a three-term
//! recurrence costing `O(m²)`.

use crate::bernstein::{basis_unchecked, check_degree_cap, DEFAULT_MAX_DEGREE};
use crate::bezier::Partition;
use crate::matrix::DenseMatrix;
use crate::{Error, Result};

/// Degrees up to this value use the direct product by default.
pub const DIRECT_MAX_DEGREE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SubdivisionMatrix {
    pub degree: usize,
    pub interval: (f64, f64),
    pub matrix: DenseMatrix,
}

impl SubdivisionMatrix {
    /// Control points of the restricted curve for one coordinate.
    pub fn apply(&self, r: &[f64]) -> Result<Vec<f64>> {
        self.matrix.mul_vec(r)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(lambda))
    }
}

/// Upper-triangular matrix whose row `j` is `[0; j] ++ b_{m-j, λ}`.
///
/// Maps `r` to the control points of `R` on `[λ, 1]`.
pub fn build_a1(m: usize, lambda: f64) -> Result<DenseMatrix> {
    build_a1_capped(m, lambda, DEFAULT_MAX_DEGREE)
}

pub fn build_a1_capped(m: usize, lambda: f64, max_degree: usize) -> Result<DenseMatrix> {
    check_lambda(lambda)?;
    check_degree_cap(m, max_degree)?;
    let mut a = DenseMatrix::zeros(m + 1, m + 1);
    for j in 0..=m {
        let b = basis_unchecked(m - j, lambda);
        a.row_mut(j)[j..].copy_from_slice(&b);
    }
    Ok(a)
}

/// Lower-triangular matrix whose row `j` is `b_{j, λ} ++ [0; m - j]`.
///
/// Maps `r` to the control points of `R` on `[0, λ]`.
pub fn build_a2(m: usize, lambda: f64) -> Result<DenseMatrix> {
    build_a2_capped(m, lambda, DEFAULT_MAX_DEGREE)
}

pub fn build_a2_capped(m: usize, lambda: f64, max_degree: usize) -> Result<DenseMatrix> {
    check_lambda(lambda)?;
    check_degree_cap(m, max_degree)?;
    let mut a = DenseMatrix::zeros(m + 1, m + 1);
    for j in 0..=m {
        let b = basis_unchecked(j, lambda);
        a.row_mut(j)[..=j].copy_from_slice(&b);
    }
    Ok(a)
}

fn check_interval(t_prev: f64, t_cur: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t_prev) || !(0.0..=1.0).contains(&t_cur) || t_prev >= t_cur {
        return Err(Error::InvalidPartition(format!(
            "sub-interval [{t_prev}, {t_cur}] is not an increasing pair in [0, 1]"
        )));
    }
    Ok(())
}

/// `D = A₁(t_prev / t_cur) A₂(t_cur)`: first cut at `t_cur`, keep the left part,
/// then cut that at the relative position of `t_prev` and keep the right part.
pub fn subdivision_direct(m: usize, t_prev: f64, t_cur: f64) -> Result<SubdivisionMatrix> {
    subdivision_direct_capped(m, t_prev, t_cur, DEFAULT_MAX_DEGREE)
}

/// [`subdivision_direct`] with a caller-chosen degree cap.
pub fn subdivision_direct_capped(
    m: usize,
    t_prev: f64,
    t_cur: f64,
    max_degree: usize,
) -> Result<SubdivisionMatrix> {
    check_interval(t_prev, t_cur)?;
    let a1 = build_a1_capped(m, t_prev / t_cur, max_degree)?;
    let a2 = build_a2_capped(m, t_cur, max_degree)?;
    Ok(SubdivisionMatrix {
        degree: m,
        interval: (t_prev, t_cur),
        matrix: a1.mul(&a2)?,
    })
}

/// The `O(m²)` construction for a single sub-interval.
///
/// Entries satisfy, for every row `1 ≤ h ≤ m - 1` and column `0 ≤ j ≤ m`
/// (terms with an out-of-range column vanish),
///
/// ```text
/// (m-h) d[h+1][j] + (2h-m) d[h][j] - h d[h-1][j]
///     = Δt ((m-j+1) d[h][j-1] + (2j-m) d[h][j] - (j+1) d[h][j+1])
/// ```
///
/// Rows `0, 1` are the value and first derivative at `a`, rows `m, m-1` the
/// same at `b`. The relation is marched inward from both ends and meets in
/// the middle; a one-sided march amplifies rounding geometrically in `m`.
pub fn subdivision_recurrence_interval(
    m: usize,
    t_prev: f64,
    t_cur: f64,
) -> Result<SubdivisionMatrix> {
    subdivision_recurrence_interval_capped(m, t_prev, t_cur, DEFAULT_MAX_DEGREE)
}

/// [`subdivision_recurrence_interval`] with a caller-chosen degree cap.
pub fn subdivision_recurrence_interval_capped(
    m: usize,
    t_prev: f64,
    t_cur: f64,
    max_degree: usize,
) -> Result<SubdivisionMatrix> {
    check_interval(t_prev, t_cur)?;
    check_degree_cap(m, max_degree)?;
    let dt = t_cur - t_prev;
    let mut d = DenseMatrix::zeros(m + 1, m + 1);
    if m == 0 {
        d[(0, 0)] = 1.0;
    } else {
        // (value, next) rows at each end; `next = value ± (Δt/m) · derivative`.
        let (v0, n0) = d.row_pair_mut(0, 1);
        seed_end_rows(m, t_prev, dt, v0, n0);
        let (vm, nm) = d.row_pair_mut(m, m - 1);
        seed_end_rows(m, t_cur, -dt, vm, nm);
    }
    if m >= 4 {
        let mf = m as f64;
        // Δt · ((m-j+1) d[h][j-1] + (2j-m) d[h][j] - (j+1) d[h][j+1]) for the whole row h.
        let column_term = |row: &[f64], out: &mut Vec<f64>| {
            out.clear();
            for j in 0..=m {
                let jf = j as f64;
                let left = if j >= 1 {
                    (mf - jf + 1.0) * row[j - 1]
                } else {
                    0.0
                };
                let right = if j < m { (jf + 1.0) * row[j + 1] } else { 0.0 };
                out.push(dt * (left + (2.0 * jf - mf) * row[j] - right));
            }
        };
        let mid = m / 2;
        let mut term = Vec::with_capacity(m + 1);
        for h in 1..mid {
            let hf = h as f64;
            column_term(d.row(h), &mut term);
            for j in 0..=m {
                let value =
                    (term[j] - (2.0 * hf - mf) * d[(h, j)] + hf * d[(h - 1, j)]) / (mf - hf);
                d[(h + 1, j)] = value;
            }
        }
        for h in ((mid + 2)..m).rev() {
            let hf = h as f64;
            column_term(d.row(h), &mut term);
            for j in 0..=m {
                let value =
                    ((mf - hf) * d[(h + 1, j)] + (2.0 * hf - mf) * d[(h, j)] - term[j]) / hf;
                d[(h - 1, j)] = value;
            }
        }
    }
    Ok(SubdivisionMatrix {
        degree: m,
        interval: (t_prev, t_cur),
        matrix: d,
    })
}

/// Writes `b_m(t)` into `value` and `b_m(t) + (step/m) b_m'(t)` into `next`.
///
/// Both come from one degree-`m - 1` basis built in place, which avoids any
/// scratch allocation. For `m = 1` the two rows share an index pair and
/// `next` is overwritten by the opposite end afterwards.
fn seed_end_rows(m: usize, t: f64, step: f64, value: &mut [f64], next: &mut [f64]) {
    let s = 1.0 - t;
    // degree m - 1 basis in value[..m]
    value[0] = 1.0;
    for k in 1..m {
        let mut prev = 0.0;
        for item in value.iter_mut().take(k + 1) {
            let cur = *item;
            *item = s * cur + t * prev;
            prev = cur;
        }
    }
    for i in (0..=m).rev() {
        let lo = if i < m { value[i] } else { 0.0 };
        let lo_prev = if i >= 1 { value[i - 1] } else { 0.0 };
        let v = s * lo + t * lo_prev;
        value[i] = v;
        next[i] = v + step * (lo_prev - lo);
    }
}

/// Recurrence-built matrices for every interval of `partition`.
pub fn subdivision_recurrence(m: usize, partition: &Partition) -> Result<Vec<SubdivisionMatrix>> {
    subdivision_recurrence_capped(m, partition, DEFAULT_MAX_DEGREE)
}

pub fn subdivision_recurrence_capped(
    m: usize,
    partition: &Partition,
    max_degree: usize,
) -> Result<Vec<SubdivisionMatrix>> {
    partition
        .intervals()
        .map(|(a, b)| subdivision_recurrence_interval_capped(m, a, b, max_degree))
        .collect()
}

/// Product-built matrices for every interval of `partition`.
pub fn subdivision_direct_all(m: usize, partition: &Partition) -> Result<Vec<SubdivisionMatrix>> {
    partition
        .intervals()
        .map(|(a, b)| subdivision_direct(m, a, b))
        .collect()
}

/// Matrices for every interval, choosing the construction by degree.
pub fn subdivision_matrices(m: usize, partition: &Partition) -> Result<Vec<SubdivisionMatrix>> {
    if m <= DIRECT_MAX_DEGREE {
        subdivision_direct_all(m, partition)
    } else {
        subdivision_recurrence(m, partition)
    }
}
