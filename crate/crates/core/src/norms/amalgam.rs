//! Amalgam norms over integer-translated unit windows.

use super::window::{family_window_integral_quadrature, sampled_window_integral, window_integral};
use super::{Interval, NormEstimate, NormExponent, SampledFunction};
use crate::error::{Error, Result};
use crate::poly::TrigPolynomial;
use crate::scalar::Real;

/// Inclusive integer range `start..=end` of window offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub start: i64,
    pub end: i64,
}

impl IndexRange {
    pub fn new(start: i64, end: i64) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidArgument(format!(
                "empty index range {start}..={end}"
            )));
        }
        Ok(Self { start, end })
    }

    /// `[−n, n]`.
    pub fn symmetric(n: i64) -> Self {
        Self { start: -n, end: n }
    }

    pub fn iter(self) -> impl Iterator<Item = i64> {
        self.start..=self.end
    }

    fn span<F: Real>(self) -> Interval<F> {
        Interval {
            start: F::from_i64(self.start).unwrap(),
            end: F::from_i64(self.end + 1).unwrap(),
        }
    }
}

fn root_radius<F: Real>(w: F, err: F, p: F) -> (F, F) {
    let w = w.max(F::zero());
    let value = w.powf(p.recip());
    let hi = (w + err).powf(p.recip());
    let lo = (w - err).max(F::zero()).powf(p.recip());
    (value, (hi - value).max(value - lo))
}

/// `max_{n ∈ range} (∫_n^{n+1} |f|^p)^{1/p}`.
pub fn amalgam_linf_norm<F: Real>(
    f: &TrigPolynomial<F>,
    p: NormExponent<F>,
    range: IndexRange,
) -> Result<NormEstimate<F>> {
    let family = std::slice::from_ref(f);
    let roundoff = F::lit(64.0) * F::epsilon() * f.coefficient_l1().powf(p.value());
    let mut best = (F::zero(), F::zero());
    for n in range.iter() {
        let x = F::from_i64(n).unwrap();
        let (w, err) = if p.is_even_integer() {
            (window_integral(f, p, x)?, roundoff)
        } else {
            let q = family_window_integral_quadrature(family, p, x)?;
            (q.value, q.error)
        };
        if w >= best.0 {
            best = (w, err);
        }
    }
    let (value, error_radius) = root_radius(best.0, best.1, p.value());
    Ok(NormEstimate {
        value,
        error_radius,
        window: range.span(),
        grid_step: F::one(),
    })
}

/// Sampled-function variant of [`amalgam_linf_norm`].
pub fn amalgam_linf_norm_sampled<F: Real>(
    g: &SampledFunction<F>,
    p: NormExponent<F>,
    range: IndexRange,
) -> Result<NormEstimate<F>> {
    let mut best = (F::zero(), F::zero());
    for n in range.iter() {
        let q = sampled_window_integral(g, p, F::from_i64(n).unwrap())?;
        if q.value >= best.0 {
            best = (q.value, q.error);
        }
    }
    let (value, error_radius) = root_radius(best.0, best.1, p.value());
    Ok(NormEstimate {
        value,
        error_radius,
        window: range.span(),
        grid_step: F::one(),
    })
}

/// Per-window norms `(n, (∫_n^{n+1} |g|^q)^{1/q})` for `n` in `range`.
pub fn amalgam_window_norms<F: Real>(
    g: &SampledFunction<F>,
    q: NormExponent<F>,
    range: IndexRange,
) -> Result<Vec<(i64, F)>> {
    range
        .iter()
        .map(|n| {
            let w = sampled_window_integral(g, q, F::from_i64(n).unwrap())?;
            Ok((n, w.value.max(F::zero()).powf(q.value().recip())))
        })
        .collect()
}

/// `Σ_{n ∈ range} (∫_n^{n+1} |g|^{p'})^{1/p'}`, the partial sum of the
/// predual amalgam norm.
pub fn amalgam_l1_norm<F: Real>(
    g: &SampledFunction<F>,
    p_conj: NormExponent<F>,
    range: IndexRange,
) -> Result<F> {
    Ok(amalgam_window_norms(g, p_conj, range)?
        .into_iter()
        .map(|(_, v)| v)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn p(v: f64) -> NormExponent<f64> {
        NormExponent::new(v).unwrap()
    }

    #[test]
    fn linf_examples() {
        let f = TrigPolynomial::single(1.7, Complex::new(0.0, 1.0));
        let e = amalgam_linf_norm(&f, p(3.0), IndexRange::symmetric(3)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-9);

        let c = TrigPolynomial::single(0.0, Complex::new(2.0, 0.0));
        let e = amalgam_linf_norm(&c, p(2.0), IndexRange::symmetric(3)).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);

        let chi = SampledFunction::indicator(0.0, 1.0);
        let e = amalgam_linf_norm_sampled(&chi, p(2.0), IndexRange::symmetric(4)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l1_examples() {
        let chi = SampledFunction::indicator(0.0, 1.0);
        for &q in &[1.0, 2.0, 3.5] {
            let v = amalgam_l1_norm(&chi, p(q), IndexRange::symmetric(5)).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "q = {q}: {v}");
        }
        let one = SampledFunction::constant(1.0);
        for n in [4, 16] {
            let v = amalgam_l1_norm(&one, p(2.0), IndexRange::new(0, n - 1).unwrap()).unwrap();
            assert!((v - n as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn empty_range_rejected() {
        assert!(IndexRange::new(2, 1).is_err());
    }
}
