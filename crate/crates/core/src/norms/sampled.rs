use std::fmt;
use std::sync::Arc;

use crate::scalar::Real;

/// A real function known only through point evaluation, with declared
/// breakpoints (jumps, kinks, integrable singularities) that quadrature
/// panels must not straddle.
#[derive(Clone)]
pub struct SampledFunction<F> {
    eval: Arc<dyn Fn(F) -> F + Send + Sync>,
    breakpoints: Vec<F>,
    bandwidth: F,
    sup_bound: Option<F>,
    slope_bound: Option<F>,
}

impl<F: Real> fmt::Debug for SampledFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledFunction")
            .field("breakpoints", &self.breakpoints)
            .field("bandwidth", &self.bandwidth)
            .field("sup_bound", &self.sup_bound)
            .field("slope_bound", &self.slope_bound)
            .finish()
    }
}

impl<F: Real> SampledFunction<F> {
    pub fn new<G>(g: G) -> Self
    where
        G: Fn(F) -> F + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(g),
            breakpoints: Vec::new(),
            bandwidth: F::zero(),
            sup_bound: None,
            slope_bound: None,
        }
    }

    pub fn with_breakpoints(mut self, points: Vec<F>) -> Self {
        self.breakpoints = points;
        self
    }

    pub fn with_bandwidth(mut self, bandwidth: F) -> Self {
        self.bandwidth = bandwidth;
        self
    }

    /// Declares `sup |g| <= bound`.
    pub fn with_sup_bound(mut self, bound: F) -> Self {
        self.sup_bound = Some(bound);
        self
    }

    /// Declares `sup |g'| <= bound` (only meaningful for smooth `g`).
    pub fn with_slope_bound(mut self, bound: F) -> Self {
        self.slope_bound = Some(bound);
        self
    }

    /// Indicator of `[a, b]`.
    pub fn indicator(a: F, b: F) -> Self {
        Self::new(move |x| {
            if x >= a && x <= b {
                F::one()
            } else {
                F::zero()
            }
        })
        .with_breakpoints(vec![a, b])
        .with_sup_bound(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(move |_| c)
            .with_sup_bound(c.abs())
            .with_slope_bound(F::zero())
    }

    #[inline]
    pub fn eval(&self, x: F) -> F {
        (self.eval)(x)
    }

    pub fn breakpoints(&self) -> &[F] {
        &self.breakpoints
    }

    pub fn bandwidth(&self) -> F {
        self.bandwidth
    }

    pub fn sup_bound(&self) -> Option<F> {
        self.sup_bound
    }

    pub fn slope_bound(&self) -> Option<F> {
        self.slope_bound
    }
}
