//! Stepanov-scale norms: unit-window integrals, windowed Stepanov norms,
//! the Besicovitch seminorm, amalgam norms and exceedance measures.

mod amalgam;
mod density;
mod sampled;
mod stepanov;
mod window;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::TrigPolynomial;
use crate::scalar::Real;

pub use amalgam::{
    amalgam_l1_norm, amalgam_linf_norm, amalgam_linf_norm_sampled, amalgam_window_norms, IndexRange,
};
pub use sampled::SampledFunction;
pub use stepanov::{stepanov_norm, stepanov_norm_family, stepanov_norm_sampled};
pub use window::{
    expand_square_sum_power, family_window_integral, family_window_integral_closed_form,
    family_window_integral_quadrature, integrate_density_window, sampled_integral,
    sampled_window_integral, square_sum, unit_window_factor, window_integral,
    window_integral_closed_form, window_integral_quadrature, window_profile, DEFAULT_PAIR_CAP,
    DEFAULT_TERM_CAP, QUAD_REL_TOL,
};

/// Norm exponent `p >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormExponent<F> {
    p: F,
}

impl<F: Real> NormExponent<F> {
    pub fn new(p: F) -> Result<Self> {
        if !(p >= F::one()) || !p.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "norm exponent must be finite and >= 1, got {p}"
            )));
        }
        Ok(Self { p })
    }

    pub fn value(self) -> F {
        self.p
    }

    pub fn is_even_integer(self) -> bool {
        self.even_half_power().is_some()
    }

    /// `p / 2` when `p ∈ {2, 4, 6, ...}`.
    pub fn even_half_power(self) -> Option<u32> {
        let half = self.p / F::lit(2.0);
        (half == half.round() && half >= F::one())
            .then(|| half.to_u32())
            .flatten()
    }

    /// `p' = p / (p − 1)`, infinite for `p = 1`.
    pub fn conjugate(self) -> F {
        if self.p == F::one() {
            F::infinity()
        } else {
            self.p / (self.p - F::one())
        }
    }
}

/// Closed interval `[start, end]` with `start < end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<F> {
    pub start: F,
    pub end: F,
}

impl<F: Real> Interval<F> {
    pub fn new(start: F, end: F) -> Result<Self> {
        if !(start < end) || !start.is_finite() || !end.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "interval [{start}, {end}] is degenerate"
            )));
        }
        Ok(Self { start, end })
    }

    pub fn length(self) -> F {
        self.end - self.start
    }
}

/// Default search window for windowed Stepanov sups.
pub fn default_window<F: Real>() -> Interval<F> {
    Interval {
        start: F::zero(),
        end: F::lit(64.0),
    }
}

/// A norm value with a certified error radius and the search budget that
/// produced it. For Stepanov norms the certificate covers the sup over
/// `window` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate<F> {
    pub value: F,
    pub error_radius: F,
    pub window: Interval<F>,
    pub grid_step: F,
}

impl<F: Real> NormEstimate<F> {
    pub fn upper(&self) -> F {
        self.value + self.error_radius
    }

    pub fn lower(&self) -> F {
        (self.value - self.error_radius).max(F::zero())
    }
}

#[derive(Serialize)]
struct NormEstimateJson {
    value: f64,
    error_radius: f64,
    window: [f64; 2],
    grid_step: f64,
}

impl<F: Real> Serialize for NormEstimate<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NormEstimateJson {
            value: self.value.to_f64_lossy(),
            error_radius: self.error_radius.to_f64_lossy(),
            window: [
                self.window.start.to_f64_lossy(),
                self.window.end.to_f64_lossy(),
            ],
            grid_step: self.grid_step.to_f64_lossy(),
        }
        .serialize(s)
    }
}

/// Threshold `λ > 0` of a weak-type exceedance set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceedanceThreshold<F>(F);

impl<F: Real> ExceedanceThreshold<F> {
    pub fn new(lambda: F) -> Result<Self> {
        if !(lambda > F::zero()) {
            return Err(Error::InvalidArgument(format!(
                "threshold must be positive, got {lambda}"
            )));
        }
        Ok(Self(lambda))
    }

    pub fn value(self) -> F {
        self.0
    }
}

/// Sampled measure of an exceedance set, with its resolution bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceedanceEstimate<F> {
    pub measure: F,
    pub resolution: F,
}

/// `√(Σ|c_n|²)`: the mean-square limit of a polynomial.
pub fn besicovitch_seminorm<F: Real>(f: &TrigPolynomial<F>) -> F {
    f.coefficient_l2_sq().sqrt()
}

/// `|{s ∈ [x, x+1] : |g(s)| > λ}|` by midpoint sampling at spacing
/// `grid_step`. The resolution is `step · (sign changes + 1)`.
pub fn exceedance_measure<F: Real>(
    g: &SampledFunction<F>,
    lambda: ExceedanceThreshold<F>,
    x: F,
    grid_step: F,
) -> Result<ExceedanceEstimate<F>> {
    if !(grid_step > F::zero()) {
        return Err(Error::InvalidArgument("grid step must be positive".into()));
    }
    let n = (F::one() / grid_step).ceil().to_usize().unwrap_or(1).max(1);
    let h = F::one() / F::from_usize(n).unwrap();
    let mut hits = 0usize;
    let mut changes = 0usize;
    let mut prev: Option<bool> = None;
    for i in 0..n {
        let s = x + (F::from_usize(i).unwrap() + F::lit(0.5)) * h;
        let above = g.eval(s).abs() > lambda.value();
        if above {
            hits += 1;
        }
        if prev.is_some_and(|p| p != above) {
            changes += 1;
        }
        prev = Some(above);
    }
    Ok(ExceedanceEstimate {
        measure: F::from_usize(hits).unwrap() * h,
        resolution: h * F::from_usize(changes + 1).unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use std::f64::consts::PI;

    #[test]
    fn exponent_validation() {
        assert!(NormExponent::new(0.5).is_err());
        assert!(NormExponent::new(f64::INFINITY).is_err());
        let p = NormExponent::new(4.0f64).unwrap();
        assert!(p.is_even_integer());
        assert_eq!(p.even_half_power(), Some(2));
        assert!((p.conjugate() - 4.0 / 3.0).abs() < 1e-15);
        assert!(!NormExponent::new(3.0).unwrap().is_even_integer());
        assert!(!NormExponent::new(1.0).unwrap().is_even_integer());
        assert!(NormExponent::new(1.0f64).unwrap().conjugate().is_infinite());
    }

    #[test]
    fn besicovitch_examples() {
        let f = TrigPolynomial::<f64>::from_real_terms(&[(2.0, 3.0), (-5.0, 4.0)]);
        assert_eq!(besicovitch_seminorm(&f), 5.0);
        let c = TrigPolynomial::single(0.0, Complex::new(3.0, -4.0));
        assert_eq!(besicovitch_seminorm(&c), 5.0);
        assert_eq!(besicovitch_seminorm(&TrigPolynomial::<f64>::zero()), 0.0);
    }

    #[test]
    fn exceedance_examples() {
        let two = SampledFunction::constant(2.0);
        let one = ExceedanceThreshold::new(1.0).unwrap();
        let three = ExceedanceThreshold::new(3.0).unwrap();
        assert_eq!(
            exceedance_measure(&two, one, 0.3, 0.01).unwrap().measure,
            1.0
        );
        assert_eq!(
            exceedance_measure(&two, three, 0.3, 0.01).unwrap().measure,
            0.0
        );

        let g = SampledFunction::new(|s: f64| 2.0 * (2.0 * PI * s).cos());
        let lam = ExceedanceThreshold::new(2f64.sqrt()).unwrap();
        let est = exceedance_measure(&g, lam, 0.0, 1e-3).unwrap();
        assert!((est.measure - 0.5).abs() <= est.resolution, "{est:?}");
    }

    #[test]
    fn threshold_must_be_positive() {
        assert!(ExceedanceThreshold::new(0.0).is_err());
    }

    #[test]
    fn estimate_json_shape() {
        let e = NormEstimate {
            value: 1.5,
            error_radius: 0.25,
            window: Interval::new(0.0, 64.0).unwrap(),
            grid_step: 0.125,
        };
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"value":1.5,"error_radius":0.25,"window":[0.0,64.0],"grid_step":0.125}"#
        );
    }
}
