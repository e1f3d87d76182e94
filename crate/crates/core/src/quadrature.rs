//! Globally adaptive composite Gauss-Legendre quadrature.
//!
//! Each panel is integrated with a pair of Gauss-Legendre rules of
//! increasing order; their difference is the panel's error estimate. The
//! panel with the largest estimate is bisected until the summed estimate
//! meets the tolerance or the node budget runs out.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Orders available to the rule ladder.
const LEVELS: [usize; 10] = [8, 12, 16, 24, 32, 48, 64, 96, 128, 192];

/// Default node cap per integral.
pub const DEFAULT_NODE_BUDGET: usize = 1 << 20;

/// Nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the three-term Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, 0.0);
                for j in 0..n {
                    let p2 = p1;
                    p1 = p0;
                    let jf = j as f64;
                    p0 = ((2.0 * jf + 1.0) * z * p1 - jf * p2) / (jf + 1.0);
                }
                dp = nf * (z * p0 - p1) / (z * z - 1.0);
                let dz = p0 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// `∫_a^b g` with this rule.
    pub fn apply<F, V, G>(&self, g: &G, a: F, b: F) -> V
    where
        F: Real,
        V: QuadValue<F>,
        G: Fn(F) -> V,
    {
        let half = (b - a) / F::lit(2.0);
        let mid = a + half;
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + g(mid + half * F::lit(*x)) * F::lit(*w);
        }
        acc * half
    }
}

fn rules() -> &'static [GaussLegendre] {
    static RULES: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
    RULES.get_or_init(|| LEVELS.iter().map(|&n| GaussLegendre::new(n)).collect())
}

/// Values a quadrature can accumulate: real or complex scalars.
pub trait QuadValue<F>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<F, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> F;
}

impl<F: Real> QuadValue<F> for F {
    fn zero() -> Self {
        F::zero()
    }
    fn magnitude(self) -> F {
        self.abs()
    }
}

impl<F: Real> QuadValue<F> for Complex<F> {
    fn zero() -> Self {
        Complex::new(F::zero(), F::zero())
    }
    fn magnitude(self) -> F {
        self.norm()
    }
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions<F> {
    pub abs_tol: F,
    pub rel_tol: F,
    pub node_budget: usize,
    /// Highest angular frequency expected in the integrand; sizes the initial
    /// panels and the starting rule.
    pub bandwidth: F,
}

impl<F: Real> QuadratureOptions<F> {
    pub fn new(abs_tol: F) -> Self {
        Self {
            abs_tol,
            rel_tol: F::zero(),
            node_budget: DEFAULT_NODE_BUDGET,
            bandwidth: F::zero(),
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: F) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_bandwidth(mut self, bandwidth: F) -> Self {
        self.bandwidth = bandwidth.abs();
        self
    }

    pub fn with_node_budget(mut self, budget: usize) -> Self {
        self.node_budget = budget;
        self
    }
}

/// Integral value, summed error estimate and nodes spent.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<V, F> {
    pub value: V,
    pub error: F,
    pub nodes: usize,
}

struct Panel<V, F> {
    a: F,
    b: F,
    value: V,
    error: F,
    level: usize,
}

struct Ranked<F>(F, usize);

impl<F: Real> PartialEq for Ranked<F> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<F: Real> Eq for Ranked<F> {}
impl<F: Real> PartialOrd for Ranked<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<F: Real> Ord for Ranked<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .partial_cmp(&other.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.1.cmp(&self.1))
    }
}

fn level_for<F: Real>(omega_w: F) -> usize {
    let want = omega_w.to_f64_lossy() * 0.5 + 4.0;
    LEVELS
        .iter()
        .position(|&n| n as f64 >= want)
        .unwrap_or(LEVELS.len() - 2)
        .min(LEVELS.len() - 2)
}

fn eval_panel<F, V, G>(g: &G, a: F, b: F, level: usize) -> (Panel<V, F>, usize)
where
    F: Real,
    V: QuadValue<F>,
    G: Fn(F) -> V,
{
    let r = rules();
    let lo: V = r[level].apply(g, a, b);
    let hi: V = r[level + 1].apply(g, a, b);
    let error = (hi - lo).magnitude();
    (
        Panel {
            a,
            b,
            value: hi,
            error,
            level,
        },
        LEVELS[level] + LEVELS[level + 1],
    )
}

/// Adaptive integral of `g` over `[a, b]`. Interior `breakpoints` (kinks,
/// jumps, integrable singularities) become panel boundaries.
pub fn integrate<F, V, G>(
    g: G,
    a: F,
    b: F,
    breakpoints: &[F],
    opts: &QuadratureOptions<F>,
) -> Result<Quadrature<V, F>>
where
    F: Real,
    V: QuadValue<F>,
    G: Fn(F) -> V,
{
    if a == b {
        return Ok(Quadrature {
            value: V::zero(),
            error: F::zero(),
            nodes: 0,
        });
    }
    let (lo, hi, sign) = if a < b {
        (a, b, F::one())
    } else {
        (b, a, -F::one())
    };

    let mut cuts: Vec<F> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > lo && p < hi)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    let mut edges = vec![lo];
    edges.extend(cuts);
    edges.push(hi);

    // Initial panels sized so each holds a few oscillations at most.
    let span_per_panel = F::lit(16.0);
    let mut panels: Vec<Panel<V, F>> = Vec::new();
    let mut nodes = 0usize;
    for w in edges.windows(2) {
        let (s, e) = (w[0], w[1]);
        if e <= s {
            continue;
        }
        let count = (opts.bandwidth * (e - s) / span_per_panel)
            .ceil()
            .to_usize()
            .unwrap_or(1)
            .clamp(1, 1 << 16);
        let width = (e - s) / F::from_usize(count).unwrap();
        let level = level_for(opts.bandwidth * width);
        for i in 0..count {
            let pa = s + width * F::from_usize(i).unwrap();
            let pb = if i + 1 == count { e } else { pa + width };
            let (p, used) = eval_panel(&g, pa, pb, level);
            nodes += used;
            panels.push(p);
        }
    }

    let mut heap: BinaryHeap<Ranked<F>> = panels
        .iter()
        .enumerate()
        .map(|(i, p)| Ranked(p.error, i))
        .collect();
    let min_width = (hi - lo) * F::lit(1e-15);

    let mut total_err: F = panels.iter().map(|p| p.error).sum();
    let mut total_val = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total_val.magnitude());
        if total_err <= tol {
            break;
        }
        let Some(Ranked(_, idx)) = heap.pop() else {
            break;
        };
        let (pa, pb, level) = (panels[idx].a, panels[idx].b, panels[idx].level);
        if pb - pa <= min_width {
            // Cannot refine further; keep the estimate as is.
            if heap.is_empty() {
                break;
            }
            continue;
        }
        if nodes >= opts.node_budget {
            return Err(Error::QuadratureBudgetExceeded {
                budget: opts.node_budget,
                error: total_err.to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
            });
        }
        let mid = pa + (pb - pa) / F::lit(2.0);
        let (left, u1) = eval_panel(&g, pa, mid, level);
        let (right, u2) = eval_panel(&g, mid, pb, level);
        nodes += u1 + u2;
        total_err = total_err - panels[idx].error + left.error + right.error;
        total_val = total_val - panels[idx].value + left.value + right.value;
        panels[idx] = left;
        heap.push(Ranked(panels[idx].error, idx));
        panels.push(right);
        heap.push(Ranked(panels[panels.len() - 1].error, panels.len() - 1));
    }

    panels.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(Ordering::Equal));
    let value = panels.iter().fold(V::zero(), |acc, p| acc + p.value);
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Quadrature {
        value: value * sign,
        error,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        for &n in &LEVELS {
            let r = GaussLegendre::new(n);
            let wsum: f64 = r.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n = {n}");
            // x^{2n-2} over [-1, 1] = 2/(2n-1)
            let k = (2 * n - 2) as i32;
            let v: f64 = r.apply(&|x: f64| x.powi(k), -1.0, 1.0);
            assert!((v - 2.0 / (k as f64 + 1.0)).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn oscillatory_integral() {
        let opts = QuadratureOptions::new(1e-13).with_bandwidth(50.0);
        let q = integrate(|x: f64| (50.0 * x).cos(), 0.0, 3.0, &[], &opts).unwrap();
        assert!((q.value - (150.0f64).sin() / 50.0).abs() < 1e-12);
    }

    #[test]
    fn log_singularity_converges() {
        let opts = QuadratureOptions::new(1e-10);
        let q = integrate(|x: f64| x.ln().powi(2), 0.0, 1.0, &[], &opts).unwrap();
        assert!((q.value - 2.0).abs() < 1e-9, "{}", q.value);
    }

    #[test]
    fn reversed_limits_and_breakpoints() {
        let opts = QuadratureOptions::new(1e-12);
        let q = integrate(
            |x: f64| if x < 0.5 { 1.0 } else { 0.0 },
            1.0,
            0.0,
            &[0.5],
            &opts,
        )
        .unwrap();
        assert!((q.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = QuadratureOptions::new(1e-14).with_node_budget(100);
        let r = integrate(|x: f64| x.abs().sqrt().recip(), -1.0, 1.0, &[], &opts);
        assert!(matches!(r, Err(Error::QuadratureBudgetExceeded { .. })));
    }

    #[test]
    fn complex_values() {
        let opts = QuadratureOptions::new(1e-13).with_bandwidth(3.0);
        let q: Quadrature<Complex<f64>, f64> = integrate(
            |x: f64| Complex::new(0.0, 3.0 * x).exp(),
            0.0,
            1.0,
            &[],
            &opts,
        )
        .unwrap();
        let exact = (Complex::new(0.0, 3.0).exp() - 1.0) / Complex::new(0.0, 3.0);
        assert!((q.value - exact).norm() < 1e-13);
    }
}
