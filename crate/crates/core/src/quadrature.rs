//! Gauss–Legendre quadrature, fixed order and adaptive by interval bisection.

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive integration settings.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub rel_tol: f64,
    /// Absolute floor on the error target, for integrands that may vanish.
    pub abs_tol: f64,
    pub max_depth: u32,
    pub order: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_depth: 30,
            order: 10,
        }
    }
}

impl Adaptive {
    /// Integrate `f` over `[a, b]`, bisecting until two halves agree with the whole.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let rule = GaussLegendre::new(self.order);
        let whole = rule.integrate(&f, a, b);
        // Absolute target from a first estimate of the magnitude.
        let scale = rule.integrate(|x| f(x).abs(), a, b).max(f64::MIN_POSITIVE);
        // Halving the tolerance per level must stop at the rounding noise
        // of `f`, or a tight request never converges.
        let floor = (64.0 * f64::EPSILON * scale).max(self.abs_tol);
        let tol = (self.rel_tol * scale).max(floor);
        refine(&rule, &f, a, b, whole, tol, floor, self.max_depth)
    }
}

pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    Adaptive {
        rel_tol,
        ..Adaptive::default()
    }
    .integrate(f, a, b)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    rule: &GaussLegendre,
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    floor: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(f, a, mid);
    let right = rule.integrate(f, mid, b);
    let split = left + right;
    if depth == 0 || (split - whole).abs() <= tol.max(floor) {
        return split;
    }
    refine(rule, f, a, mid, left, 0.5 * tol, floor, depth - 1)
        + refine(rule, f, mid, b, right, 0.5 * tol, floor, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        for n in 1..=12 {
            let rule = GaussLegendre::new(n);
            let weight_sum: f64 = rule.weights.iter().sum();
            assert!((weight_sum - 2.0).abs() < 1e-13, "n = {n}");
            for p in 0..(2 * n) {
                let got = rule.integrate(|x| x.powi(p as i32), 0.0, 1.0);
                let exact = 1.0 / (p as f64 + 1.0);
                assert!(
                    (got - exact).abs() < 1e-13,
                    "n = {n}, p = {p}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn adaptive_handles_kinks() {
        let got = integrate_adaptive(|x| (x - 0.3f64).abs().sqrt(), 0.0, 1.0, 1e-10);
        let exact = 2.0 / 3.0 * (0.3f64.powf(1.5) + 0.7f64.powf(1.5));
        assert!((got - exact).abs() < 1e-9, "{got} vs {exact}");
    }

    #[test]
    fn absolute_floor_stops_on_noise() {
        let adaptive = Adaptive {
            abs_tol: 1e-20,
            ..Adaptive::default()
        };
        let got = adaptive.integrate(|x| 1e-30 * (1e6 * x).sin(), 0.0, 1.0);
        assert!(got.abs() <= 1e-29);
    }

    #[test]
    fn adaptive_smooth() {
        let got = integrate_adaptive(f64::sin, 0.0, std::f64::consts::PI, 1e-12);
        assert!((got - 2.0).abs() < 1e-11);
    }
}
