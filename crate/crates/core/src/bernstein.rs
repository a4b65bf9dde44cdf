//! Bernstein basis polynomials, binomials, forward differences and Gramians.
//!
//! `B_i^m(t) = C(m, i) t^i (1 - t)^(m - i)`. The Gramian `G_{m,n}` collects the
//! exact inner products `∫₀¹ B_i^m B_j^n dt`, which turns L2 distances between
//! Bézier curves into finite quadratic forms.

use std::sync::OnceLock;

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

/// Largest degree accepted by the free functions of this module.
pub const DEFAULT_MAX_DEGREE: usize = 60;

/// Pascal triangle of binomial coefficients stored as reals.
#[derive(Debug, Clone)]
pub struct Binomials {
    rows: Vec<Vec<f64>>,
}

impl Binomials {
    /// Table with rows `0..=max_n`.
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![1.0]);
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = vec![1.0; n + 1];
            for k in 1..n {
                row[k] = prev[k - 1] + prev[k];
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, k)`; zero when `k > n`.
    pub fn get(&self, n: usize, k: usize) -> Result<f64> {
        let row = self.rows.get(n).ok_or(Error::DegreeTooLarge {
            degree: n,
            max: self.max_n(),
        })?;
        Ok(row.get(k).copied().unwrap_or(0.0))
    }
}

fn table() -> &'static Binomials {
    static TABLE: OnceLock<Binomials> = OnceLock::new();
    // Gramians need C(m + n, ·) with both degrees at the cap.
    TABLE.get_or_init(|| Binomials::new(2 * DEFAULT_MAX_DEGREE))
}

fn check_degree(m: usize) -> Result<()> {
    check_degree_cap(m, DEFAULT_MAX_DEGREE)
}

pub(crate) fn check_degree_cap(m: usize, max: usize) -> Result<()> {
    if m > max {
        Err(Error::DegreeTooLarge { degree: m, max })
    } else {
        Ok(())
    }
}

fn check_parameter(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange(t))
    }
}

pub fn binomial(n: usize, k: usize) -> Result<f64> {
    table().get(n, k)
}

/// `[B_0^m(t), ..., B_m^m(t)]`.
pub fn bernstein_basis(m: usize, t: f64) -> Result<Vec<f64>> {
    check_degree(m)?;
    check_parameter(t)?;
    Ok(basis_unchecked(m, t))
}

/// Triangular recursion `B_i^k = (1 - t) B_i^{k-1} + t B_{i-1}^{k-1}`; every
/// level is a convex combination so the sum stays at 1 up to rounding.
pub(crate) fn basis_unchecked(m: usize, t: f64) -> Vec<f64> {
    let s = 1.0 - t;
    let mut b = vec![0.0; m + 1];
    b[0] = 1.0;
    for k in 1..=m {
        let mut prev = 0.0;
        for item in b.iter_mut().take(k + 1) {
            let cur = *item;
            *item = s * cur + t * prev;
            prev = cur;
        }
    }
    b
}

/// Derivatives `[(B_0^m)'(t), ..., (B_m^m)'(t)]`.
pub fn bernstein_basis_derivative(m: usize, t: f64) -> Result<Vec<f64>> {
    check_degree(m)?;
    check_parameter(t)?;
    Ok(derivative_unchecked(m, t))
}

pub(crate) fn derivative_unchecked(m: usize, t: f64) -> Vec<f64> {
    let mut out = vec![0.0; m + 1];
    if m == 0 {
        return out;
    }
    let lower = basis_unchecked(m - 1, t);
    let mf = m as f64;
    for (h, o) in out.iter_mut().enumerate() {
        let left = if h >= 1 { lower[h - 1] } else { 0.0 };
        let right = if h < m { lower[h] } else { 0.0 };
        *o = mf * (left - right);
    }
    out
}

/// `Δ^j q_0 = Σ_{h=0}^{j} (-1)^{j-h} C(j, h) q_h`.
pub fn forward_difference(q: &[f64], j: usize) -> Result<f64> {
    if j >= q.len() {
        return Err(Error::DifferenceOrder {
            order: j,
            len: q.len(),
        });
    }
    let t = table();
    let mut acc = 0.0;
    for (h, &qh) in q.iter().enumerate().take(j + 1) {
        let sign = if (j - h).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += sign * t.get(j, h)? * qh;
    }
    Ok(acc)
}

/// The Bernstein Gramian `G_{m,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gramian {
    pub m: usize,
    pub n: usize,
    pub matrix: DenseMatrix,
}

/// `g_ij = C(m, i) C(n, j) / ((m + n + 1) C(m + n, i + j))`.
pub fn gramian(m: usize, n: usize) -> Result<Gramian> {
    check_degree(m)?;
    check_degree(n)?;
    let t = table();
    let scale = 1.0 / (m + n + 1) as f64;
    let mut matrix = DenseMatrix::zeros(m + 1, n + 1);
    for i in 0..=m {
        let cmi = t.get(m, i)?;
        for j in 0..=n {
            // Keep the fraction well scaled before the final product.
            let ratio = cmi / t.get(m + n, i + j)?;
            matrix[(i, j)] = scale * (ratio * t.get(n, j)?);
        }
    }
    Ok(Gramian { m, n, matrix })
}
