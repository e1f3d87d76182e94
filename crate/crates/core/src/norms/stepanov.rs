//! Certified windowed Stepanov norms.
//!
//! The window profile `W(x) = ∫_x^{x+1} |f|^p` is sampled on a uniform grid,
//! the best grid point is refined by golden-section search, and an upper
//! bound for `sup W` over the scanned window is derived from
//! `|W'(x)| = | |f(x+1)|^p − |f(x)|^p | <= sup |f|^p` and, when the integrand
//! is Lipschitz, `|W''| <= 2 sup |(|f|^p)'|`.

use super::density::{FamilyDensity, SampledDensity, WindowDensity};
use super::window::{
    density_tolerance, density_window_quadrature, expand_square_sum_power, square_sum,
    window_profile, DEFAULT_TERM_CAP,
};
use super::{Interval, NormEstimate, NormExponent, SampledFunction};
use crate::error::{Error, Result};
use crate::poly::TrigPolynomial;
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::Real;

const GOLDEN_ITERATIONS: usize = 40;

/// Sampled profile values with per-point error bounds.
struct Samples<F> {
    start: F,
    step: F,
    values: Vec<F>,
    errors: Vec<F>,
}

/// Derivative bounds for the window profile.
#[derive(Clone, Copy)]
struct ProfileBounds<F> {
    lipschitz: Option<F>,
    curvature: Option<F>,
}

fn min_opt<F: Real>(a: Option<F>, b: Option<F>) -> Option<F> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn grid_layout<F: Real>(window: Interval<F>, grid_step: F) -> Result<(usize, F, usize)> {
    if !(grid_step > F::zero()) || !grid_step.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "grid step must be positive, got {grid_step}"
        )));
    }
    let per_unit = (F::one() / grid_step).ceil().to_usize().unwrap_or(1).max(1);
    let h = F::one() / F::from_usize(per_unit).unwrap();
    let cells = (window.length() / h).ceil().to_usize().unwrap_or(0);
    Ok((per_unit, h, cells))
}

fn golden_max<F: Real, E>(lo: F, hi: F, mut eval: E) -> Result<(F, F, F)>
where
    E: FnMut(F) -> Result<(F, F)>,
{
    let ratio = F::lit(0.618_033_988_749_894_9);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut ec) = eval(c)?;
    let (mut fd, mut ed) = eval(d)?;
    let mut best = if fc >= fd { (c, fc, ec) } else { (d, fd, ed) };
    for _ in 0..GOLDEN_ITERATIONS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            ed = ec;
            c = b - ratio * (b - a);
            let r = eval(c)?;
            fc = r.0;
            ec = r.1;
            if fc > best.1 {
                best = (c, fc, ec);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            ec = ed;
            d = a + ratio * (b - a);
            let r = eval(d)?;
            fd = r.0;
            ed = r.1;
            if fd > best.1 {
                best = (d, fd, ed);
            }
        }
    }
    Ok(best)
}

fn finish<F: Real, E>(
    samples: Samples<F>,
    bounds: ProfileBounds<F>,
    p: NormExponent<F>,
    window: Interval<F>,
    eval: E,
) -> Result<NormEstimate<F>>
where
    E: FnMut(F) -> Result<(F, F)>,
{
    let h = samples.step;
    let n = samples.values.len();
    let (best_k, _) =
        samples
            .values
            .iter()
            .enumerate()
            .fold((0usize, F::neg_infinity()), |acc, (k, &v)| {
                if v > acc.1 {
                    (k, v)
                } else {
                    acc
                }
            });
    let grid_x = |k: usize| samples.start + F::from_usize(k).unwrap() * h;
    let scanned_end = grid_x(n - 1);

    let mut best = (
        grid_x(best_k),
        samples.values[best_k],
        samples.errors[best_k],
    );
    if n > 1 {
        let lo = (best.0 - h).max(samples.start);
        let hi = (best.0 + h).min(scanned_end);
        let refined = golden_max(lo, hi, eval)?;
        if refined.1 > best.1 {
            best = refined;
        }
    }

    let two = F::lit(2.0);
    let mut upper = best.1 + best.2;
    for k in 0..n.saturating_sub(1) {
        let (w0, w1) = (
            samples.values[k] + samples.errors[k],
            samples.values[k + 1] + samples.errors[k + 1],
        );
        let via_slope = bounds
            .lipschitz
            .map(|l| (w0 + w1 + l * h) / two)
            .unwrap_or(F::infinity());
        let via_curv = bounds
            .curvature
            .map(|c| w0.max(w1) + c * h * h / F::lit(8.0))
            .unwrap_or(F::infinity());
        upper = upper.max(via_slope.min(via_curv));
    }
    let inv_p = F::one() / p.value();
    let value = best.1.max(F::zero()).powf(inv_p);
    let lower = (best.1 - best.2).max(F::zero()).powf(inv_p);
    let upper_norm = upper.max(F::zero()).powf(inv_p);
    let radius = (upper_norm - value).max(value - lower).max(F::zero());
    Ok(NormEstimate {
        value,
        error_radius: radius,
        window: Interval::new(window.start, scanned_end.max(window.end))?,
        grid_step: h,
    })
}

/// Scans a closed-form window profile polynomial.
fn scan_closed_form<F: Real>(
    density: &TrigPolynomial<F>,
    density_bounds: ProfileBounds<F>,
    p: NormExponent<F>,
    window: Interval<F>,
    grid_step: F,
) -> Result<NormEstimate<F>> {
    let (_, h, cells) = grid_layout(window, grid_step)?;
    let profile = window_profile(density);
    let coeff_l1 = profile.coefficient_l1();
    let roundoff = F::lit(64.0) * F::epsilon() * (coeff_l1 + F::one());
    let values = profile
        .evaluate_grid(window.start, h, cells + 1)
        .into_iter()
        .map(|z| z.re)
        .collect();
    let samples = Samples {
        start: window.start,
        step: h,
        values,
        errors: vec![roundoff; cells + 1],
    };
    let bounds = ProfileBounds {
        lipschitz: min_opt(density_bounds.lipschitz, Some(profile.derivative_l1())),
        curvature: min_opt(
            density_bounds.curvature,
            Some(
                profile
                    .terms()
                    .iter()
                    .map(|t| (t.coeff * t.freq * t.freq).norm())
                    .sum(),
            ),
        ),
    };
    finish(samples, bounds, p, window, |x| {
        Ok((profile.evaluate(x).re, roundoff))
    })
}

/// Scans a pointwise density by summing per-cell panel integrals.
fn scan_density<F: Real, D: WindowDensity<F>>(
    density: &D,
    p: NormExponent<F>,
    window: Interval<F>,
    grid_step: F,
) -> Result<NormEstimate<F>> {
    let (per_unit, h, cells) = grid_layout(window, grid_step)?;
    let tol_window = density_tolerance(density);
    let tol_panel = tol_window / F::from_usize(per_unit).unwrap();
    let panel_count = cells + per_unit;
    let opts = QuadratureOptions::new(tol_panel).with_bandwidth(density.bandwidth());
    let mut panel_vals = Vec::with_capacity(panel_count);
    let mut panel_errs = Vec::with_capacity(panel_count);
    for i in 0..panel_count {
        let a = window.start + F::from_usize(i).unwrap() * h;
        let q = integrate(|s| density.value(s), a, a + h, density.breakpoints(), &opts)?;
        panel_vals.push(q.value);
        panel_errs.push(q.error);
    }
    let mut values = Vec::with_capacity(cells + 1);
    let mut errors = Vec::with_capacity(cells + 1);
    for k in 0..=cells {
        values.push(panel_vals[k..k + per_unit].iter().copied().sum());
        errors.push(panel_errs[k..k + per_unit].iter().copied().sum());
    }
    let samples = Samples {
        start: window.start,
        step: h,
        values,
        errors,
    };
    let bounds = ProfileBounds {
        lipschitz: density.sup_bound(),
        curvature: density.slope_bound().map(|s| F::lit(2.0) * s),
    };
    finish(samples, bounds, p, window, |x| {
        let q = density_window_quadrature(density, x, x + F::one(), tol_window)?;
        Ok((q.value, q.error))
    })
}

/// Windowed Stepanov norm of the square-sum `(Σ_j |f_j|²)^{1/2}`.
pub fn stepanov_norm_family<F: Real>(
    family: &[TrigPolynomial<F>],
    p: NormExponent<F>,
    window: Interval<F>,
    grid_step: F,
) -> Result<NormEstimate<F>> {
    let density = FamilyDensity::new(family, p);
    let bounds = ProfileBounds {
        lipschitz: density.sup_bound(),
        curvature: density.slope_bound().map(|s| F::lit(2.0) * s),
    };
    if let Some(m) = p.even_half_power() {
        grid_layout(window, grid_step)?;
        let terms: usize = family.iter().map(|f| f.len()).sum();
        // Closed form pays |D| per grid point; quadrature pays roughly
        // 24 nodes × `terms` sin/cos per panel.
        let budget = (144 * terms.max(1)).min(DEFAULT_TERM_CAP);
        let base = square_sum(family).len().max(1) as f64;
        if base.powi(m as i32) <= 16.0 * budget as f64 {
            match expand_square_sum_power(family, m, budget) {
                Ok(d) => return scan_closed_form(&d, bounds, p, window, grid_step),
                Err(Error::TermBlowup { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    scan_density(&density, p, window, grid_step)
}

/// Windowed Stepanov norm `(sup_x ∫_x^{x+1} |f|^p)^{1/p}` over `window`.
pub fn stepanov_norm<F: Real>(
    f: &TrigPolynomial<F>,
    p: NormExponent<F>,
    window: Interval<F>,
    grid_step: F,
) -> Result<NormEstimate<F>> {
    stepanov_norm_family(std::slice::from_ref(f), p, window, grid_step)
}

/// Windowed Stepanov norm of a sampled function. Without a declared
/// `sup |g|` the error radius is infinite.
pub fn stepanov_norm_sampled<F: Real>(
    g: &SampledFunction<F>,
    p: NormExponent<F>,
    window: Interval<F>,
    grid_step: F,
) -> Result<NormEstimate<F>> {
    scan_density(&SampledDensity::new(g, p), p, window, grid_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    type P = TrigPolynomial<f64>;

    fn p(v: f64) -> NormExponent<f64> {
        NormExponent::new(v).unwrap()
    }

    fn win(a: f64, b: f64) -> Interval<f64> {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn unimodular_is_one() {
        let f = P::single(2.3, Complex::new(0.0, 1.0));
        for &e in &[1.0, 2.0, 3.0, 4.0] {
            let est = stepanov_norm(&f, p(e), win(0.0, 8.0), 0.125).unwrap();
            assert!(
                (est.value - 1.0).abs() <= est.error_radius + 1e-12,
                "{est:?}"
            );
            assert!(est.error_radius <= 0.01, "{est:?}");
        }
    }

    #[test]
    fn two_cos_closed_form_max() {
        // W(x) = 2 + 2 sin(1) cos(2x + 1)
        let f = P::from_real_terms(&[(-1.0, 1.0), (1.0, 1.0)]);
        let est =
            stepanov_norm(&f, p(2.0), win(0.0, 2.0 * std::f64::consts::PI), 1.0 / 32.0).unwrap();
        let exact = (2.0 + 2.0 * 1f64.sin()).sqrt();
        assert!((est.value - exact).abs() < 1e-9, "{est:?}");
        assert!((est.value - exact).abs() <= est.error_radius + 1e-12);
    }

    #[test]
    fn constant_p4() {
        let f = P::single(0.0, Complex::new(5.0, 0.0));
        let est = stepanov_norm(&f, p(4.0), win(0.0, 4.0), 0.25).unwrap();
        assert!((est.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn quadrature_and_closed_form_scans_agree() {
        let f = P::from_terms([
            (-3.1, Complex::new(0.4, -0.2)),
            (-0.7, Complex::new(1.0, 0.3)),
            (1.9, Complex::new(-0.6, 0.1)),
            (4.4, Complex::new(0.2, 0.9)),
        ]);
        let window = win(0.0, 16.0);
        let d = expand_square_sum_power(std::slice::from_ref(&f), 1, 10_000).unwrap();
        let closed = scan_closed_form(
            &d,
            ProfileBounds {
                lipschitz: None,
                curvature: None,
            },
            p(2.0),
            window,
            1.0 / 16.0,
        )
        .unwrap();
        let fam = [f];
        let quad = scan_density(
            &FamilyDensity::new(&fam, p(2.0)),
            p(2.0),
            window,
            1.0 / 16.0,
        )
        .unwrap();
        assert!(
            (closed.value - quad.value).abs() < 1e-8,
            "{closed:?} {quad:?}"
        );
    }

    #[test]
    fn sampled_without_bound_has_infinite_radius() {
        let g = SampledFunction::new(|x: f64| x.sin());
        let est = stepanov_norm_sampled(&g, p(2.0), win(0.0, 4.0), 0.25).unwrap();
        assert!(est.error_radius.is_infinite());
        assert!(est.value > 0.0);
    }

    #[test]
    fn rejects_bad_grid_step() {
        let f = P::single(0.0, Complex::new(1.0, 0.0));
        assert!(stepanov_norm(&f, p(2.0), win(0.0, 1.0), 0.0).is_err());
    }
}
