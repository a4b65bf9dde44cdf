//! Strictly convex quadratic programs with box constraints.
//!
//! ```text
//!     minimize    ½ xᵀ Q x + xᵀ d + a
//!     subject to  lower ≤ x ≤ upper
//! ```
//!
//! [`solve_active_set`] is the production solver: a primal active-set method
//! that fixes a working set of variables at their bounds, minimizes exactly
//! over the rest, and moves bounds in and out of the working set until the
//! KKT conditions hold. [`solve_projected_gradient`] is a slow but simple
//! reference used to cross-check it.

use log::warn;

use crate::matrix::{dot, norm_inf, Cholesky, CompensatedSum, DenseMatrix};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Relative symmetry tolerance for `Q`.
const SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxQP {
    q: DenseMatrix,
    d: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    constant: f64,
}

impl BoxQP {
    pub fn new(
        q: DenseMatrix,
        d: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        constant: f64,
    ) -> Result<Self> {
        let n = d.len();
        if q.rows() != n || q.cols() != n || lower.len() != n || upper.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "Q is {}x{}, d has {n} entries, bounds have {} and {}",
                q.rows(),
                q.cols(),
                lower.len(),
                upper.len()
            )));
        }
        if !q.is_symmetric(SYMMETRY_TOLERANCE) {
            return Err(Error::NotSymmetric);
        }
        for (j, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if l.is_nan() || u.is_nan() || l > u {
                return Err(Error::Spec(crate::SpecViolation::InvertedBox {
                    coordinate: j,
                    lower: l,
                    upper: u,
                }));
            }
        }
        Ok(BoxQP {
            q,
            d,
            lower,
            upper,
            constant,
        })
    }

    /// A problem without bounds.
    pub fn unbounded(q: DenseMatrix, d: Vec<f64>, constant: f64) -> Result<Self> {
        let n = d.len();
        Self::new(
            q,
            d,
            vec![f64::NEG_INFINITY; n],
            vec![f64::INFINITY; n],
            constant,
        )
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn q(&self) -> &DenseMatrix {
        &self.q
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    /// Same objective, new bounds.
    pub fn with_bounds(&self, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(self.q.clone(), self.d.clone(), lower, upper, self.constant)
    }

    /// `½ xᵀ Q x + xᵀ d + a`.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let qx = self.q.mul_vec(x).expect("length checked by caller");
        0.5 * dot(x, &qx) + dot(x, &self.d) + self.constant
    }

    /// `Q x + d`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.q.mul_vec(x).expect("length checked by caller");
        g.iter_mut().zip(&self.d).for_each(|(gi, di)| *gi += di);
        g
    }

    pub fn clamp(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&l, &u))| v.max(l).min(u))
            .collect()
    }

    pub fn is_feasible(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&l, &u))| l <= v && v <= u)
    }

    /// Lower bounds, replaced by the upper bound or zero where unbounded below.
    pub fn lower_corner(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| if l.is_finite() { l } else { u.min(0.0) })
            .map(|v| if v.is_finite() { v } else { 0.0 })
            .collect()
    }

    /// Midpoint of the box, clamped zero along unbounded directions.
    pub fn center(&self) -> Vec<f64> {
        let mid: Vec<f64> = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| {
                let c = 0.5 * (l + u);
                if c.is_finite() {
                    c
                } else {
                    0.0
                }
            })
            .collect();
        self.clamp(&mid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QPSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
    /// Variables held at their lower bound, including pinned ones (`lower == upper`).
    pub active_lower: Vec<usize>,
    pub active_upper: Vec<usize>,
    pub kkt_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Free,
    Lower,
    Upper,
    Pinned,
}

#[derive(Debug, Clone, Copy)]
pub struct ActiveSetOptions {
    pub tol: f64,
    /// Defaults to `100 ν` when `None`.
    pub max_iterations: Option<usize>,
}

impl Default for ActiveSetOptions {
    fn default() -> Self {
        ActiveSetOptions {
            tol: DEFAULT_TOLERANCE,
            max_iterations: None,
        }
    }
}

pub fn solve_active_set(p: &BoxQP, x0: &[f64], tol: f64) -> Result<QPSolution> {
    solve_active_set_with(
        p,
        x0,
        &ActiveSetOptions {
            tol,
            ..ActiveSetOptions::default()
        },
    )
}

/// Primal active-set method started from `x0`.
///
/// The iteration count is the number of equality subproblems solved plus the
/// number of bounds added to or released from the working set.
pub fn solve_active_set_with(
    p: &BoxQP,
    x0: &[f64],
    options: &ActiveSetOptions,
) -> Result<QPSolution> {
    let n = p.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "start has {} entries, problem {n}",
            x0.len()
        )));
    }
    Cholesky::factor(&p.q)?;
    let tol = options.tol;
    let cap = options.max_iterations.unwrap_or(100 * n.max(1));
    let mut x = x0.to_vec();
    if !p.is_feasible(&x) {
        warn!("active-set start point is infeasible; clamping it into the box");
        x = p.clamp(&x);
    }

    let mut status: Vec<Status> = (0..n)
        .map(|j| {
            let (l, u) = (p.lower[j], p.upper[j]);
            if l == u {
                Status::Pinned
            } else if x[j] == l {
                Status::Lower
            } else if x[j] == u {
                Status::Upper
            } else {
                Status::Free
            }
        })
        .collect();

    let mut iterations = 0usize;
    loop {
        if iterations > cap {
            return Err(Error::IterationLimit {
                iterations,
                best: x,
            });
        }
        let free: Vec<usize> = (0..n).filter(|&j| status[j] == Status::Free).collect();
        if !free.is_empty() {
            let target = subproblem_minimizer(p, &x, &free)?;
            iterations += 1;

            // Ratio test along target - x; strict `<` keeps the smallest index on ties.
            let mut alpha = 1.0;
            let mut blocking = None;
            for (k, &j) in free.iter().enumerate() {
                let step = target[k] - x[j];
                let ratio = if step < 0.0 && p.lower[j].is_finite() {
                    (p.lower[j] - x[j]) / step
                } else if step > 0.0 && p.upper[j].is_finite() {
                    (p.upper[j] - x[j]) / step
                } else {
                    continue;
                };
                if ratio < alpha {
                    alpha = ratio.max(0.0);
                    blocking = Some((j, step < 0.0));
                }
            }
            match blocking {
                Some((blocked, at_lower)) => {
                    for (k, &j) in free.iter().enumerate() {
                        x[j] = (x[j] + alpha * (target[k] - x[j])).clamp(p.lower[j], p.upper[j]);
                    }
                    if at_lower {
                        x[blocked] = p.lower[blocked];
                        status[blocked] = Status::Lower;
                    } else {
                        x[blocked] = p.upper[blocked];
                        status[blocked] = Status::Upper;
                    }
                    iterations += 1;
                    continue;
                }
                None => {
                    for (k, &j) in free.iter().enumerate() {
                        x[j] = target[k].clamp(p.lower[j], p.upper[j]);
                    }
                }
            }
        }

        // At the minimizer over the current free set: inspect the bound multipliers.
        let g = p.gradient(&x);
        let mut release: Option<(usize, f64)> = None;
        for j in 0..n {
            let violation = match status[j] {
                Status::Lower => -g[j],
                Status::Upper => g[j],
                _ => continue,
            };
            if violation > tol && release.is_none_or(|(_, worst)| violation > worst) {
                release = Some((j, violation));
            }
        }
        match release {
            Some((j, _)) => {
                status[j] = Status::Free;
                iterations += 1;
            }
            None => return Ok(finish(p, x, iterations, tol, |j| status[j])),
        }
    }
}

fn finish(
    p: &BoxQP,
    x: Vec<f64>,
    iterations: usize,
    tol: f64,
    status: impl Fn(usize) -> Status,
) -> QPSolution {
    let mut active_lower = Vec::new();
    let mut active_upper = Vec::new();
    for j in 0..p.dim() {
        match status(j) {
            Status::Lower | Status::Pinned => active_lower.push(j),
            Status::Upper => active_upper.push(j),
            Status::Free => {}
        }
    }
    let kkt_residual = verify_kkt(p, &x, tol);
    QPSolution {
        objective: p.objective(&x),
        x,
        iterations,
        active_lower,
        active_upper,
        kkt_residual,
    }
}

/// Minimizer over the free variables with all others held fixed.
fn subproblem_minimizer(p: &BoxQP, x: &[f64], free: &[usize]) -> Result<Vec<f64>> {
    let q_ff = p.q.submatrix(free, free)?;
    let rhs: Vec<f64> = free
        .iter()
        .map(|&i| {
            let row = p.q.row(i);
            let mut acc = CompensatedSum::new(p.d[i]);
            for j in (0..p.dim()).filter(|j| free.binary_search(j).is_err()) {
                acc.add_product(row[j], x[j]);
            }
            -acc.value()
        })
        .collect();
    let chol = Cholesky::factor(&q_ff)?;
    Ok(chol.solve_refined(&q_ff, &rhs))
}

/// Projected gradient descent with step `1 / ‖Q‖∞`, started at the box center.
pub fn solve_projected_gradient(p: &BoxQP, tol: f64) -> Result<QPSolution> {
    solve_projected_gradient_with(p, tol, 2_000_000)
}

pub fn solve_projected_gradient_with(
    p: &BoxQP,
    tol: f64,
    max_iterations: usize,
) -> Result<QPSolution> {
    let n = p.dim();
    // Confirms positive definiteness; the iteration itself never factors Q.
    Cholesky::factor(&p.q)?;
    let lipschitz = p.q.norm_inf();
    let step = if lipschitz > 0.0 {
        1.0 / lipschitz
    } else {
        1.0
    };
    let mut x = p.center();
    for iteration in 0..max_iterations {
        let g = p.gradient(&x);
        if projected_gradient_norm(p, &x, &g) <= tol {
            let status = |j: usize| classify(p, &x, j);
            let s: Vec<Status> = (0..n).map(status).collect();
            return Ok(finish(p, x, iteration, tol, |j| s[j]));
        }
        for j in 0..n {
            x[j] = (x[j] - step * g[j]).clamp(p.lower[j], p.upper[j]);
        }
    }
    Err(Error::IterationLimit {
        iterations: max_iterations,
        best: x,
    })
}

fn classify(p: &BoxQP, x: &[f64], j: usize) -> Status {
    if p.lower[j] == p.upper[j] {
        Status::Pinned
    } else if x[j] == p.lower[j] {
        Status::Lower
    } else if x[j] == p.upper[j] {
        Status::Upper
    } else {
        Status::Free
    }
}

fn projected_gradient_norm(p: &BoxQP, x: &[f64], g: &[f64]) -> f64 {
    (0..p.dim())
        .map(|j| match classify(p, x, j) {
            Status::Pinned => 0.0,
            Status::Lower => (-g[j]).max(0.0),
            Status::Upper => g[j].max(0.0),
            Status::Free => g[j].abs(),
        })
        .fold(0.0, f64::max)
}

/// Solve `Q x = -d` for symmetric positive definite `Q`.
pub fn solve_unconstrained(q: &DenseMatrix, d: &[f64]) -> Result<Vec<f64>> {
    if q.rows() != d.len() || !q.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with {} rhs",
            q.rows(),
            q.cols(),
            d.len()
        )));
    }
    let chol = Cholesky::factor(q)?;
    let rhs: Vec<f64> = d.iter().map(|v| -v).collect();
    Ok(chol.solve_refined(q, &rhs))
}

/// Largest violation of the KKT conditions at `x`.
///
/// Free variables contribute `|g_j|`, variables within `tol` of a bound the
/// wrong-signed part of `g_j`, and every variable its distance outside the box.
pub fn verify_kkt(p: &BoxQP, x: &[f64], tol: f64) -> f64 {
    let g = p.gradient(x);
    let mut worst = 0.0f64;
    for j in 0..p.dim() {
        let (l, u) = (p.lower[j], p.upper[j]);
        let infeasible = (l - x[j]).max(x[j] - u).max(0.0);
        let at_lower = (x[j] - l).abs() <= tol || x[j] < l;
        let at_upper = (u - x[j]).abs() <= tol || x[j] > u;
        let stationarity = match (at_lower, at_upper) {
            (true, true) => 0.0,
            (true, false) => (-g[j]).max(0.0),
            (false, true) => g[j].max(0.0),
            (false, false) => g[j].abs(),
        };
        worst = worst.max(infeasible).max(stationarity);
    }
    worst
}

/// Infinity-norm distance between two solutions.
pub fn solution_distance(a: &[f64], b: &[f64]) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm_inf(&diff)
}
