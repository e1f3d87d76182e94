//! Window integrands: `|g|^p` for sampled functions and `(Σ_j |f_j|²)^{p/2}`
//! for polynomial families.

use crate::norms::{NormExponent, SampledFunction};
use crate::poly::TrigPolynomial;
use crate::scalar::Real;

pub(crate) trait WindowDensity<F: Real>: Sync {
    fn value(&self, s: F) -> F;
    /// Highest angular frequency worth resolving.
    fn bandwidth(&self) -> F;
    /// `sup |density|`, if known.
    fn sup_bound(&self) -> Option<F>;
    /// `sup |density'|`, if known and the density is smooth.
    fn slope_bound(&self) -> Option<F>;
    fn breakpoints(&self) -> &[F] {
        &[]
    }
}

/// `(Σ_j |f_j|²)^{p/2}`; a single polynomial gives `|f|^p`.
pub(crate) struct FamilyDensity<'a, F> {
    family: &'a [TrigPolynomial<F>],
    half_p: F,
    /// `A` with `A² = Σ_j (Σ|c_j|)²`, a bound for the square-sum's root.
    amplitude: F,
    /// Bound for `|d/ds Σ_j |f_j|²|`.
    q_slope: F,
    /// `√(Σ_j (Σ|λ c_j|)²)`, a Lipschitz constant for `(Σ_j |f_j|²)^{1/2}`.
    root_slope: F,
    bandwidth: F,
}

impl<'a, F: Real> FamilyDensity<'a, F> {
    pub(crate) fn new(family: &'a [TrigPolynomial<F>], p: NormExponent<F>) -> Self {
        let amplitude = family
            .iter()
            .map(|f| f.coefficient_l1().powi(2))
            .sum::<F>()
            .sqrt();
        let q_slope = family
            .iter()
            .map(|f| F::lit(2.0) * f.coefficient_l1() * f.derivative_l1())
            .sum();
        let root_slope = family
            .iter()
            .map(|f| f.derivative_l1().powi(2))
            .sum::<F>()
            .sqrt();
        let max_freq = family
            .iter()
            .map(|f| f.max_abs_freq())
            .fold(F::zero(), F::max);
        Self {
            family,
            half_p: p.value() / F::lit(2.0),
            amplitude,
            q_slope,
            root_slope,
            bandwidth: p.value() * max_freq,
        }
    }

    pub(crate) fn amplitude(&self) -> F {
        self.amplitude
    }
}

impl<F: Real> WindowDensity<F> for FamilyDensity<'_, F> {
    fn value(&self, s: F) -> F {
        let q: F = self.family.iter().map(|f| f.evaluate(s).norm_sqr()).sum();
        if self.half_p == F::one() {
            q
        } else {
            q.powf(self.half_p)
        }
    }

    fn bandwidth(&self) -> F {
        self.bandwidth
    }

    fn sup_bound(&self) -> Option<F> {
        Some(self.amplitude.powf(F::lit(2.0) * self.half_p))
    }

    fn slope_bound(&self) -> Option<F> {
        let p = F::lit(2.0) * self.half_p;
        let via_root = p * self.amplitude.powf(p - F::one()) * self.root_slope;
        if self.half_p < F::one() {
            return Some(via_root);
        }
        let via_square = self.half_p * self.amplitude.powf(p - F::lit(2.0)) * self.q_slope;
        Some(via_root.min(via_square))
    }
}

/// `|g|^p` for a sampled function.
pub(crate) struct SampledDensity<'a, F> {
    g: &'a SampledFunction<F>,
    p: F,
}

impl<'a, F: Real> SampledDensity<'a, F> {
    pub(crate) fn new(g: &'a SampledFunction<F>, p: NormExponent<F>) -> Self {
        Self { g, p: p.value() }
    }
}

impl<F: Real> WindowDensity<F> for SampledDensity<'_, F> {
    fn value(&self, s: F) -> F {
        let v = self.g.eval(s).abs();
        if self.p == F::one() {
            v
        } else {
            v.powf(self.p)
        }
    }

    fn bandwidth(&self) -> F {
        self.p * self.g.bandwidth()
    }

    fn sup_bound(&self) -> Option<F> {
        self.g.sup_bound().map(|b| b.powf(self.p))
    }

    fn slope_bound(&self) -> Option<F> {
        let sup = self.g.sup_bound()?;
        let slope = self.g.slope_bound()?;
        if self.p < F::one() {
            return None;
        }
        Some(self.p * sup.powf(self.p - F::one()) * slope)
    }

    fn breakpoints(&self) -> &[F] {
        self.g.breakpoints()
    }
}
