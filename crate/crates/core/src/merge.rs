//! Merging a composite Bézier curve into one Bézier curve of degree `m`.
//!
//! The merged curve `R` has control points `r_0, ..., r_m`. The first `k` and
//! last `l` of them are forced by matching derivatives of the input at the
//! endpoints. The remaining free points minimize the exact squared L2 error,
//! which for every coordinate is a strictly convex quadratic
//! `½ xᵀ Q x + xᵀ d + a`. Without a box this is a linear solve ("traditional"
//! merging); with a box it becomes a box-constrained QP.

use log::warn;

use crate::bernstein::{binomial, forward_difference, gramian, DEFAULT_MAX_DEGREE};
use crate::bezier::{distance, BezierSegment, CompositeBezier, Point};
use crate::matrix::{dot, DenseMatrix};
use crate::qpbox::{self, BoxQP, QPSolution, DEFAULT_TOLERANCE};
use crate::subdivision::{subdivision_matrices, SubdivisionMatrix};
use crate::{Error, Result, SpecViolation};

/// Sample count for the maximum error.
pub const DEFAULT_SAMPLES: usize = 500;

/// Parameter against which endpoint derivatives are matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContinuityFrame {
    /// Derivatives with respect to the global parameter `t ∈ [0, 1]` of the
    /// composite curve, including the `Δt^{-j}` chain-rule factors.
    #[default]
    Global,
    /// Derivatives of `R` in `t` matched against the end segments' derivatives
    /// in their own local parameters, no interval-width factors.
    Segment,
}

/// Axis-aligned bounds `c_h ≤ r_j^h ≤ C_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(SpecViolation::Other(format!(
                "box corners have {} and {} coordinates",
                lower.len(),
                upper.len()
            ))
            .into());
        }
        for (h, (&c, &big_c)) in lower.iter().zip(&upper).enumerate() {
            if c.is_nan() || big_c.is_nan() || c > big_c {
                return Err(SpecViolation::InvertedBox {
                    coordinate: h,
                    lower: c,
                    upper: big_c,
                }
                .into());
            }
        }
        Ok(BoxBounds { lower, upper })
    }

    /// Tightest box around every control point of `curve`.
    pub fn around_control_points(curve: &CompositeBezier) -> Self {
        let d = curve.dim();
        let mut lower = vec![f64::INFINITY; d];
        let mut upper = vec![f64::NEG_INFINITY; d];
        for p in curve.control_points() {
            for h in 0..d {
                lower[h] = lower[h].min(p[h]);
                upper[h] = upper[h].max(p[h]);
            }
        }
        BoxBounds { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn diagonal(&self) -> f64 {
        distance(&self.lower, &self.upper)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(&v, (&c, &big_c))| c <= v && v <= big_c)
    }

    /// `true` when `self` contains `other`.
    pub fn encloses(&self, other: &BoxBounds) -> bool {
        self.contains(&other.lower) && self.contains(&other.upper)
    }
}

/// What to merge into: target degree, endpoint continuity orders and optional box.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeSpec {
    pub degree: usize,
    /// `k`: derivatives of orders `0..k` match at `t = 0`.
    pub left_order: usize,
    /// `l`: derivatives of orders `0..l` match at `t = 1`.
    pub right_order: usize,
    pub bounds: Option<BoxBounds>,
    pub frame: ContinuityFrame,
    pub samples: usize,
    pub tol: f64,
}

impl MergeSpec {
    pub fn new(degree: usize, left_order: usize, right_order: usize) -> Self {
        MergeSpec {
            degree,
            left_order,
            right_order,
            bounds: None,
            frame: ContinuityFrame::default(),
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_box(mut self, bounds: BoxBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn without_box(mut self) -> Self {
        self.bounds = None;
        self
    }

    pub fn with_frame(mut self, frame: ContinuityFrame) -> Self {
        self.frame = frame;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn validate(&self, curve: &CompositeBezier) -> Result<()> {
        let (m, k, l) = (self.degree, self.left_order, self.right_order);
        if m > DEFAULT_MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree: m,
                max: DEFAULT_MAX_DEGREE,
            });
        }
        if k + l > m {
            return Err(SpecViolation::OrdersExceedDegree { k, l, m }.into());
        }
        let n1 = curve.first_segment().degree();
        if k > n1 + 1 {
            return Err(SpecViolation::LeftOrderTooHigh { k, n: n1 }.into());
        }
        let ns = curve.last_segment().degree();
        if l > ns + 1 {
            return Err(SpecViolation::RightOrderTooHigh { l, n: ns }.into());
        }
        let n_max = curve.max_degree();
        if m < n_max {
            return Err(SpecViolation::DegreeBelowInput { m, n: n_max }.into());
        }
        if let Some(b) = &self.bounds {
            if b.dim() != curve.dim() {
                return Err(SpecViolation::BoxDimension {
                    expected: curve.dim(),
                    found: b.dim(),
                }
                .into());
            }
        }
        if self.samples == 0 {
            return Err(SpecViolation::Other("sample count must be positive".into()).into());
        }
        Ok(())
    }

    /// `𝒞 = {0, ..., k-1} ∪ {m-l+1, ..., m}`.
    pub fn fixed_indices(&self) -> Vec<usize> {
        let m = self.degree;
        (0..self.left_order)
            .chain((m + 1 - self.right_order)..=m)
            .collect()
    }

    /// `ℱ = {k, ..., m-l}`.
    pub fn free_indices(&self) -> Vec<usize> {
        (self.left_order..=(self.degree - self.right_order)).collect()
    }
}

/// Control points pinned by the endpoint conditions, in ascending index order.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoints {
    pub indices: Vec<usize>,
    pub values: Vec<Point>,
}

impl FixedPoints {
    /// Coordinate `h` of every fixed point, in index order.
    pub fn coordinate(&self, h: usize) -> Vec<f64> {
        self.values.iter().map(|p| p[h]).collect()
    }
}

/// `r_0..r_{k-1}` and `r_{m-l+1}..r_m` from the endpoint derivatives of `curve`.
pub fn fixed_endpoint_points(curve: &CompositeBezier, spec: &MergeSpec) -> Result<FixedPoints> {
    spec.validate(curve)?;
    let (m, k, l) = (spec.degree, spec.left_order, spec.right_order);
    let dim = curve.dim();
    let partition = curve.partition();
    let (left_scale, right_scale) = match spec.frame {
        ContinuityFrame::Global => (
            1.0 / partition.width(0),
            1.0 / partition.width(curve.segment_count() - 1),
        ),
        ContinuityFrame::Segment => (1.0, 1.0),
    };

    let first = curve.first_segment();
    let n1 = first.degree();
    let mut left: Vec<Point> = Vec::with_capacity(k);
    for j in 0..k {
        let factor = left_scale.powi(j as i32) * binomial(n1, j)? / binomial(m, j)?;
        let mut r = vec![0.0; dim];
        for (h, rh) in r.iter_mut().enumerate() {
            let p = first.coordinate(h);
            let mut value = factor * forward_difference(&p, j)?;
            for (i, prev) in left.iter().enumerate() {
                let sign = if (j + i) % 2 == 0 { 1.0 } else { -1.0 };
                value -= sign * binomial(j, i)? * prev[h];
            }
            *rh = value;
        }
        left.push(r);
    }

    let last = curve.last_segment();
    let ns = last.degree();
    // right[j] holds r_{m-j}.
    let mut right: Vec<Point> = Vec::with_capacity(l);
    for j in 0..l {
        let sign_j = if j % 2 == 0 { 1.0 } else { -1.0 };
        let factor = sign_j * right_scale.powi(j as i32) * binomial(ns, j)? / binomial(m, j)?;
        let mut r = vec![0.0; dim];
        for (h, rh) in r.iter_mut().enumerate() {
            let p = last.coordinate(h);
            let mut value = factor * forward_difference(&p[ns - j..], j)?;
            for i in 1..=j {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                // r_{m-j+i} = right[j - i]
                value -= sign * binomial(j, i)? * right[j - i][h];
            }
            *rh = value;
        }
        right.push(r);
    }

    let mut values = left;
    values.extend(right.into_iter().rev());
    Ok(FixedPoints {
        indices: spec.fixed_indices(),
        values,
    })
}

/// The per-coordinate QP in the free control values.
///
/// ```text
/// Q = 2 Σ Δt_i D_Fᵀ G_mm D_F
/// d = 2 Σ Δt_i D_Fᵀ (G_mm D_C r_C - G_mn p)
/// a =   Σ Δt_i (pᵀ G_nn p - 2 pᵀ G_nm D_C r_C + r_Cᵀ D_Cᵀ G_mm D_C r_C)
/// ```
///
/// where `D_F`, `D_C` are the free and fixed columns of the `i`-th subdivision
/// matrix, so `½ xᵀ Q x + xᵀ d + a = ∫ (P_h - R_h)²`.
pub fn assemble_objective(
    curve: &CompositeBezier,
    spec: &MergeSpec,
    subdivision: &[SubdivisionMatrix],
    fixed: &FixedPoints,
    coordinate: usize,
) -> Result<BoxQP> {
    let m = spec.degree;
    if subdivision.len() != curve.segment_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} subdivision matrices for {} segments",
            subdivision.len(),
            curve.segment_count()
        )));
    }
    if coordinate >= curve.dim() {
        return Err(Error::IndexOutOfRange {
            index: coordinate,
            extent: curve.dim(),
        });
    }
    let all: Vec<usize> = (0..=m).collect();
    let free = spec.free_indices();
    let fixed_values = fixed.coordinate(coordinate);
    let g_mm = gramian(m, m)?.matrix;

    let mut q = DenseMatrix::zeros(free.len(), free.len());
    let mut d = vec![0.0; free.len()];
    let mut constant = 0.0;
    for ((seg, sub), (t0, t1)) in curve
        .segments()
        .iter()
        .zip(subdivision)
        .zip(curve.partition().intervals())
    {
        if sub.degree != m {
            return Err(Error::DimensionMismatch(format!(
                "subdivision matrix of degree {} for target degree {m}",
                sub.degree
            )));
        }
        let width = t1 - t0;
        let n = seg.degree();
        let p = seg.coordinate(coordinate);
        let d_free = sub.matrix.submatrix(&all, &free)?;
        let d_fixed = sub.matrix.submatrix(&all, &fixed.indices)?;

        let g_free = g_mm.mul(&d_free)?;
        q.add_scaled(&d_free.tr_mul(&g_free)?, 2.0 * width)?;

        // Bernstein coefficients on this interval of the fixed part of R.
        let fixed_part = d_fixed.mul_vec(&fixed_values)?;
        let g_fixed = g_mm.mul_vec_compensated(&fixed_part)?;
        let g_mn_p = gramian(m, n)?.matrix.mul_vec_compensated(&p)?;
        let residual: Vec<f64> = g_fixed.iter().zip(&g_mn_p).map(|(a, b)| a - b).collect();
        for (di, v) in d.iter_mut().zip(d_free.tr_mul_vec(&residual)?) {
            *di += 2.0 * width * v;
        }

        let g_nn_p = gramian(n, n)?.matrix.mul_vec(&p)?;
        constant += width
            * (dot(&p, &g_nn_p) - 2.0 * dot(&fixed_part, &g_mn_p) + dot(&fixed_part, &g_fixed));
    }

    let (lower, upper) = match &spec.bounds {
        Some(b) => (
            vec![b.lower()[coordinate]; free.len()],
            vec![b.upper()[coordinate]; free.len()],
        ),
        None => (
            vec![f64::NEG_INFINITY; free.len()],
            vec![f64::INFINITY; free.len()],
        ),
    };
    BoxQP::new(q, d, lower, upper, constant)
}

/// Continuity-eliminated form of the merge: fixed points plus one QP per coordinate.
#[derive(Debug, Clone)]
pub struct EliminatedProblem {
    pub fixed_indices: Vec<usize>,
    pub free_indices: Vec<usize>,
    pub fixed: FixedPoints,
    pub problems: Vec<BoxQP>,
    pub subdivision: Vec<SubdivisionMatrix>,
}

impl EliminatedProblem {
    pub fn new(curve: &CompositeBezier, spec: &MergeSpec) -> Result<Self> {
        let fixed = fixed_endpoint_points(curve, spec)?;
        let subdivision = subdivision_matrices(spec.degree, curve.partition())?;
        let problems = (0..curve.dim())
            .map(|h| assemble_objective(curve, spec, &subdivision, &fixed, h))
            .collect::<Result<Vec<_>>>()?;
        Ok(EliminatedProblem {
            fixed_indices: fixed.indices.clone(),
            free_indices: spec.free_indices(),
            fixed,
            problems,
            subdivision,
        })
    }

    /// Full control polygon from the free values of every coordinate.
    pub fn control_points(&self, free_values: &[Vec<f64>]) -> Vec<Point> {
        let m = self.fixed_indices.len() + self.free_indices.len() - 1;
        let dim = self.problems.len();
        let mut points = vec![vec![0.0; dim]; m + 1];
        for (idx, value) in self.fixed.indices.iter().zip(&self.fixed.values) {
            points[*idx].clone_from(value);
        }
        for (h, values) in free_values.iter().enumerate() {
            for (&j, &v) in self.free_indices.iter().zip(values) {
                points[j][h] = v;
            }
        }
        points
    }
}

/// Solver outcome for one coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateReport {
    /// Value `½ xᵀ Q x + xᵀ d + a` of the coordinate's QP at the solution.
    pub objective: f64,
    /// The same squared L2 error evaluated from the residual control points,
    /// free of the cancellation the expanded quadratic form suffers near zero.
    pub squared_error: f64,
    pub iterations: usize,
    /// Control-point indices held at the lower bound.
    pub active_lower: Vec<usize>,
    /// Control-point indices held at the upper bound.
    pub active_upper: Vec<usize>,
    pub kkt_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeResult {
    pub control_points: Vec<Point>,
    /// `E₂ = sqrt(∫ ‖P - R‖²)`.
    pub e2: f64,
    /// Largest sampled distance between `P` and `R`.
    pub e_inf: f64,
    pub coordinates: Vec<CoordinateReport>,
    pub spec: MergeSpec,
    pub warnings: Vec<String>,
}

impl MergeResult {
    pub fn iterations(&self) -> Vec<usize> {
        self.coordinates.iter().map(|c| c.iterations).collect()
    }

    /// Sum over coordinates of the exact squared error.
    pub fn squared_error(&self) -> f64 {
        self.coordinates.iter().map(|c| c.squared_error).sum()
    }

    pub fn curve(&self) -> BezierSegment {
        BezierSegment::new(self.control_points.clone())
            .expect("merged control points are well formed")
    }
}

/// Box-constrained merge when `spec` carries bounds, traditional otherwise.
pub fn merge(curve: &CompositeBezier, spec: &MergeSpec) -> Result<MergeResult> {
    if spec.bounds.is_some() {
        merge_boxed(curve, spec)
    } else {
        merge_traditional(curve, spec)
    }
}

/// Unconstrained least-squares merge; any bounds in `spec` are ignored.
pub fn merge_traditional(curve: &CompositeBezier, spec: &MergeSpec) -> Result<MergeResult> {
    let spec = spec.clone().without_box();
    let problem = EliminatedProblem::new(curve, &spec)?;
    let mut free_values = Vec::with_capacity(curve.dim());
    let mut reports = Vec::with_capacity(curve.dim());
    for (h, qp) in problem.problems.iter().enumerate() {
        let x = qpbox::solve_unconstrained(qp.q(), qp.d()).map_err(|e| {
            warn!("coordinate {h}: {e}");
            e
        })?;
        reports.push(CoordinateReport {
            objective: qp.objective(&x),
            squared_error: 0.0,
            iterations: 0,
            active_lower: Vec::new(),
            active_upper: Vec::new(),
            kkt_residual: qpbox::verify_kkt(qp, &x, spec.tol),
        });
        free_values.push(x);
    }
    Ok(finish(
        curve,
        spec,
        &problem,
        free_values,
        reports,
        Vec::new(),
    ))
}

/// Merge with the free control points confined to `spec.bounds`, each
/// coordinate solved by the active-set method from the lower-bound corner.
pub fn merge_boxed(curve: &CompositeBezier, spec: &MergeSpec) -> Result<MergeResult> {
    let bounds = spec
        .bounds
        .as_ref()
        .ok_or_else(|| SpecViolation::Other("box-constrained merging needs a box".into()))?;
    let problem = EliminatedProblem::new(curve, spec)?;
    let mut warnings = Vec::new();
    for (idx, point) in problem.fixed.indices.iter().zip(&problem.fixed.values) {
        if !bounds.contains(point) {
            let msg = format!("fixed control point r_{idx} = {point:?} lies outside the box");
            warn!("{msg}");
            warnings.push(msg);
        }
    }
    let mut free_values = Vec::with_capacity(curve.dim());
    let mut reports = Vec::with_capacity(curve.dim());
    for qp in &problem.problems {
        let solution: QPSolution = qpbox::solve_active_set(qp, &qp.lower_corner(), spec.tol)?;
        let to_point_index = |v: &Vec<usize>| v.iter().map(|&j| problem.free_indices[j]).collect();
        reports.push(CoordinateReport {
            objective: solution.objective,
            squared_error: 0.0,
            iterations: solution.iterations,
            active_lower: to_point_index(&solution.active_lower),
            active_upper: to_point_index(&solution.active_upper),
            kkt_residual: solution.kkt_residual,
        });
        free_values.push(solution.x);
    }
    Ok(finish(
        curve,
        spec.clone(),
        &problem,
        free_values,
        reports,
        warnings,
    ))
}

fn finish(
    curve: &CompositeBezier,
    spec: MergeSpec,
    problem: &EliminatedProblem,
    free_values: Vec<Vec<f64>>,
    mut coordinates: Vec<CoordinateReport>,
    warnings: Vec<String>,
) -> MergeResult {
    let control_points = problem.control_points(&free_values);
    let per_coordinate = residual_squared_error(curve, &problem.subdivision, &control_points);
    for (c, e) in coordinates.iter_mut().zip(per_coordinate) {
        c.squared_error = e;
    }
    let squared: f64 = coordinates.iter().map(|c| c.squared_error).sum();
    let e_inf = error_linf(curve, &control_points, spec.samples);
    MergeResult {
        control_points,
        e2: squared.max(0.0).sqrt(),
        e_inf,
        coordinates,
        spec,
        warnings,
    }
}

/// Exact `∫ (P_h - R_h)²` per coordinate for merged control points.
pub fn squared_error(curve: &CompositeBezier, control_points: &[Point]) -> Result<Vec<f64>> {
    if control_points.is_empty() {
        return Err(Error::InvalidSegment("no control points".into()));
    }
    let m = control_points.len() - 1;
    if let Some(n) = curve.segments().iter().map(|s| s.degree()).find(|&n| n > m) {
        return Err(SpecViolation::DegreeBelowInput { m, n }.into());
    }
    if control_points.iter().any(|p| p.len() != curve.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "control points must have dimension {}",
            curve.dim()
        )));
    }
    let subdivision = subdivision_matrices(m, curve.partition())?;
    Ok(residual_squared_error(curve, &subdivision, control_points))
}

/// `Σ_i Δt_i eᵀ G_mm e` with `e` the degree-`m` Bernstein coefficients of
/// `P - R` on the `i`-th interval.
fn residual_squared_error(
    curve: &CompositeBezier,
    subdivision: &[SubdivisionMatrix],
    control_points: &[Point],
) -> Vec<f64> {
    let m = control_points.len() - 1;
    let g_mm = gramian(m, m).expect("degree validated").matrix;
    (0..curve.dim())
        .map(|h| {
            let r: Vec<f64> = control_points.iter().map(|p| p[h]).collect();
            curve
                .segments()
                .iter()
                .zip(subdivision)
                .zip(curve.partition().intervals())
                .map(|((seg, sub), (t0, t1))| {
                    let local = sub.apply(&r).expect("matching degree");
                    let p = elevate(&seg.coordinate(h), m);
                    let e: Vec<f64> = local.iter().zip(&p).map(|(a, b)| a - b).collect();
                    let ge = g_mm.mul_vec(&e).expect("matching degree");
                    (t1 - t0) * dot(&e, &ge)
                })
                .sum::<f64>()
                .max(0.0)
        })
        .collect()
}

/// Bernstein coefficients of the same polynomial at degree `m ≥ n`.
fn elevate(p: &[f64], m: usize) -> Vec<f64> {
    let n = p.len() - 1;
    let r = m - n;
    (0..=m)
        .map(|j| {
            let lo = j.saturating_sub(r);
            let hi = j.min(n);
            let scale = binomial(m, j).expect("degree validated");
            (lo..=hi)
                .map(|i| {
                    binomial(n, i).expect("degree validated")
                        * binomial(r, j - i).expect("degree validated")
                        * p[i]
                })
                .sum::<f64>()
                / scale
        })
        .collect()
}

/// `max ‖P(t) - R(t)‖` over `t = 0, 1/M, ..., 1`.
pub fn error_linf(curve: &CompositeBezier, control_points: &[Point], samples: usize) -> f64 {
    let merged =
        BezierSegment::new(control_points.to_vec()).expect("merged control points are well formed");
    let samples = samples.max(1);
    (0..=samples)
        .map(|i| {
            let t = i as f64 / samples as f64;
            distance(&curve.evaluate(t), &merged.evaluate(t))
        })
        .fold(0.0, f64::max)
}

/// Which faces of a box to push outward, per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSelection {
    pub lower: Vec<bool>,
    pub upper: Vec<bool>,
}

impl FaceSelection {
    pub fn lower_faces(dim: usize) -> Self {
        FaceSelection {
            lower: vec![true; dim],
            upper: vec![false; dim],
        }
    }

    pub fn upper_faces(dim: usize) -> Self {
        FaceSelection {
            lower: vec![false; dim],
            upper: vec![true; dim],
        }
    }

    pub fn all_faces(dim: usize) -> Self {
        FaceSelection {
            lower: vec![true; dim],
            upper: vec![true; dim],
        }
    }

    /// Per coordinate, the face carrying more of the merged curve's free
    /// control points; ties go to the lower face, and a coordinate with no
    /// point on either face is left alone.
    pub fn from_active_bounds(result: &MergeResult) -> Self {
        let mut lower = Vec::with_capacity(result.coordinates.len());
        let mut upper = Vec::with_capacity(result.coordinates.len());
        for c in &result.coordinates {
            let (at_lower, at_upper) = (c.active_lower.len(), c.active_upper.len());
            let pick_lower = at_lower > 0 && at_lower >= at_upper;
            lower.push(pick_lower);
            upper.push(!pick_lower && at_upper > 0);
        }
        FaceSelection { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// Move the selected faces of `previous` outward by `step` times its diagonal.
pub fn expand_box(previous: &BoxBounds, step: f64, faces: &FaceSelection) -> Result<BoxBounds> {
    if faces.dim() != previous.dim() || faces.upper.len() != previous.dim() {
        return Err(SpecViolation::BoxDimension {
            expected: previous.dim(),
            found: faces.dim(),
        }
        .into());
    }
    let shift = step * previous.diagonal();
    let lower = previous
        .lower()
        .iter()
        .zip(&faces.lower)
        .map(|(&c, &move_it)| if move_it { c - shift } else { c })
        .collect();
    let upper = previous
        .upper()
        .iter()
        .zip(&faces.upper)
        .map(|(&c, &move_it)| if move_it { c + shift } else { c })
        .collect();
    BoxBounds::new(lower, upper)
}

/// How [`suggest_box`] picks the faces to expand.
#[derive(Debug, Clone, PartialEq)]
pub enum FaceRule {
    Explicit(FaceSelection),
    /// Merge with the previous box under this spec and expand the faces
    /// that hold the most control points.
    MostOccupied(MergeSpec),
}

/// Restricted-area heuristic: the first box is the bounding box of the input
/// control points; each later box moves chosen faces of the previous one
/// outward by `step` times its diagonal.
pub fn suggest_box(
    curve: &CompositeBezier,
    step: f64,
    previous: Option<&BoxBounds>,
    rule: &FaceRule,
) -> Result<BoxBounds> {
    let Some(previous) = previous else {
        return Ok(BoxBounds::around_control_points(curve));
    };
    let faces = match rule {
        FaceRule::Explicit(faces) => faces.clone(),
        FaceRule::MostOccupied(spec) => {
            let result = merge_boxed(curve, &spec.clone().with_box(previous.clone()))?;
            FaceSelection::from_active_bounds(&result)
        }
    };
    expand_box(previous, step, &faces)
}
