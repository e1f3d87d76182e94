//! Unit-window integrals `∫_x^{x+1} |f|^p`.
//!
//! For even integer `p` the integrand `(f·f̄)^{p/2}` is itself a
//! trigonometric polynomial and each term integrates in closed form. Other
//! exponents, and expansions that would exceed the term cap, go through
//! adaptive Gauss-Legendre quadrature.

use num_complex::Complex;

use super::density::{FamilyDensity, SampledDensity, WindowDensity};
use super::{NormExponent, SampledFunction};
use crate::error::{Error, Result};
use crate::poly::TrigPolynomial;
use crate::quadrature::{integrate, Quadrature, QuadratureOptions, DEFAULT_NODE_BUDGET};
use crate::scalar::Real;

/// Maximum number of merged terms an even-power expansion may produce.
pub const DEFAULT_TERM_CAP: usize = 200_000;

/// Maximum number of pairwise products a single expansion step may form.
pub const DEFAULT_PAIR_CAP: usize = 20_000_000;

/// Relative quadrature tolerance, scaled by `sup |integrand|`.
pub const QUAD_REL_TOL: f64 = 1e-10;

/// `Σ_j |f_j|²` as a real-valued polynomial.
pub fn square_sum<F: Real>(family: &[TrigPolynomial<F>]) -> TrigPolynomial<F> {
    family
        .iter()
        .fold(TrigPolynomial::zero(), |acc, f| acc.add(&f.abs_sq()))
}

fn checked_multiply<F: Real>(
    a: &TrigPolynomial<F>,
    b: &TrigPolynomial<F>,
    cap: usize,
) -> Result<TrigPolynomial<F>> {
    let pairs = a.len().saturating_mul(b.len());
    if pairs > DEFAULT_PAIR_CAP.max(cap) {
        return Err(Error::TermBlowup { terms: pairs, cap });
    }
    let out = a.multiply(b);
    if out.len() > cap {
        return Err(Error::TermBlowup {
            terms: out.len(),
            cap,
        });
    }
    Ok(out)
}

/// `(Σ_j |f_j|²)^m` by repeated squaring, failing with
/// [`Error::TermBlowup`] once any intermediate exceeds `cap` terms.
pub fn expand_square_sum_power<F: Real>(
    family: &[TrigPolynomial<F>],
    m: u32,
    cap: usize,
) -> Result<TrigPolynomial<F>> {
    let base = square_sum(family);
    if base.len() > cap {
        return Err(Error::TermBlowup {
            terms: base.len(),
            cap,
        });
    }
    if m == 0 {
        return Ok(TrigPolynomial::single(
            F::zero(),
            Complex::new(F::one(), F::zero()),
        ));
    }
    let mut result: Option<TrigPolynomial<F>> = None;
    let mut power = base;
    let mut e = m;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => power.clone(),
                Some(r) => checked_multiply(&r, &power, cap)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        power = checked_multiply(&power, &power, cap)?;
    }
    Ok(result.expect("m >= 1"))
}

/// `∫_0^1 e^{iμs} ds = e^{iμ/2} sinc(μ/2)`.
pub fn unit_window_factor<F: Real>(mu: F) -> Complex<F> {
    let half = mu / F::lit(2.0);
    let sinc = if half == F::zero() {
        F::one()
    } else {
        half.sin() / half
    };
    let (s, c) = half.sin_cos();
    Complex::new(c * sinc, s * sinc)
}

/// The window profile `W(x) = ∫_x^{x+1} D` of a polynomial density `D`,
/// itself a polynomial in `x`.
pub fn window_profile<F: Real>(density: &TrigPolynomial<F>) -> TrigPolynomial<F> {
    density.map_coefficients(|mu, c| c * unit_window_factor(mu))
}

/// `∫_x^{x+1} D(s) ds` for a real-valued polynomial density `D`.
pub fn integrate_density_window<F: Real>(density: &TrigPolynomial<F>, x: F) -> F {
    density
        .terms()
        .iter()
        .map(|t| {
            let (s, c) = (t.freq * x).sin_cos();
            (t.coeff * unit_window_factor(t.freq) * Complex::new(c, s)).re
        })
        .sum()
}

fn even_half_power<F: Real>(p: NormExponent<F>) -> Result<u32> {
    p.even_half_power().ok_or_else(|| {
        Error::InvalidArgument(format!(
            "closed-form window integral needs an even integer exponent, got {}",
            p.value()
        ))
    })
}

/// Closed-form window integral for a family square-sum and even `p`.
pub fn family_window_integral_closed_form<F: Real>(
    family: &[TrigPolynomial<F>],
    p: NormExponent<F>,
    x: F,
    cap: usize,
) -> Result<F> {
    let m = even_half_power(p)?;
    let density = expand_square_sum_power(family, m, cap)?;
    Ok(integrate_density_window(&density, x).max(F::zero()))
}

pub(crate) fn density_window_quadrature<F: Real, D: WindowDensity<F>>(
    density: &D,
    a: F,
    b: F,
    abs_tol: F,
) -> Result<Quadrature<F, F>> {
    let opts = QuadratureOptions::new(abs_tol)
        .with_bandwidth(density.bandwidth())
        .with_node_budget(DEFAULT_NODE_BUDGET);
    integrate(|s| density.value(s), a, b, density.breakpoints(), &opts)
}

pub(crate) fn density_tolerance<F: Real, D: WindowDensity<F>>(density: &D) -> F {
    match density.sup_bound() {
        Some(s) => F::lit(QUAD_REL_TOL) * s,
        None => F::lit(1e-12),
    }
}

/// Quadrature window integral for a family square-sum and any `p >= 1`.
pub fn family_window_integral_quadrature<F: Real>(
    family: &[TrigPolynomial<F>],
    p: NormExponent<F>,
    x: F,
) -> Result<Quadrature<F, F>> {
    let density = FamilyDensity::new(family, p);
    if density.amplitude() == F::zero() {
        return Ok(Quadrature {
            value: F::zero(),
            error: F::zero(),
            nodes: 0,
        });
    }
    let tol = density_tolerance(&density);
    density_window_quadrature(&density, x, x + F::one(), tol)
}

/// `∫_x^{x+1} (Σ_j |f_j|²)^{p/2}`: closed form for even `p`, falling back
/// to quadrature when the expansion exceeds the term cap.
pub fn family_window_integral<F: Real>(
    family: &[TrigPolynomial<F>],
    p: NormExponent<F>,
    x: F,
) -> Result<F> {
    if p.is_even_integer() {
        match family_window_integral_closed_form(family, p, x, DEFAULT_TERM_CAP) {
            Ok(v) => return Ok(v),
            Err(Error::TermBlowup { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(family_window_integral_quadrature(family, p, x)?.value)
}

/// `∫_x^{x+1} |f(s)|^p ds`.
pub fn window_integral<F: Real>(f: &TrigPolynomial<F>, p: NormExponent<F>, x: F) -> Result<F> {
    family_window_integral(std::slice::from_ref(f), p, x)
}

/// Closed-form path only; errors for non-even `p` or on term blowup.
pub fn window_integral_closed_form<F: Real>(
    f: &TrigPolynomial<F>,
    p: NormExponent<F>,
    x: F,
) -> Result<F> {
    family_window_integral_closed_form(std::slice::from_ref(f), p, x, DEFAULT_TERM_CAP)
}

/// Quadrature path only.
pub fn window_integral_quadrature<F: Real>(
    f: &TrigPolynomial<F>,
    p: NormExponent<F>,
    x: F,
) -> Result<Quadrature<F, F>> {
    family_window_integral_quadrature(std::slice::from_ref(f), p, x)
}

/// `∫_a^b |g|^p` for a sampled function.
pub fn sampled_integral<F: Real>(
    g: &SampledFunction<F>,
    p: NormExponent<F>,
    a: F,
    b: F,
) -> Result<Quadrature<F, F>> {
    let density = SampledDensity::new(g, p);
    let opts = QuadratureOptions::new(density_tolerance(&density))
        .with_rel_tol(F::lit(QUAD_REL_TOL))
        .with_bandwidth(density.bandwidth());
    integrate(|s| density.value(s), a, b, density.breakpoints(), &opts)
}

/// `∫_x^{x+1} |g|^p` for a sampled function.
pub fn sampled_window_integral<F: Real>(
    g: &SampledFunction<F>,
    p: NormExponent<F>,
    x: F,
) -> Result<Quadrature<F, F>> {
    sampled_integral(g, p, x, x + F::one())
}
