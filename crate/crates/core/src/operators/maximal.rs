//! Square function `(Σ_j |S_j f − R_j f|²)^{1/2}` and maximal partial sum
//! `S* f = max_j |S_j f|`.
//!
//! Both reduce to bucketing terms by dyadic level. `1 − φ̂(2^{−j}λ)` on the
//! band and `−φ̂(2^{−j}λ)` off it vanish unless `2^{j−1} < |λ| <= 2^j`, so
//! every term feeds exactly one summand of the square function.

use num_complex::Complex;

use super::{require_level, DyadicLevel};
use crate::error::Result;
use crate::mollifier::Mollifier;
use crate::poly::{Term, TrigPolynomial};
use crate::scalar::Real;

/// Smallest `j >= 0` with `|λ| <= 2^j`.
fn level_of<F: Real>(lambda: F) -> u32 {
    let a = lambda.abs();
    let mut j = 0u32;
    let mut cut = F::one();
    while a > cut {
        j += 1;
        cut = cut * F::lit(2.0);
    }
    j
}

/// Smallest `j` with `2^{j−1} >= max|λ_n|`: from there on every summand of
/// the square function vanishes.
pub fn required_square_level<F: Real>(f: &TrigPolynomial<F>) -> u32 {
    let m = f.max_abs_freq();
    if m == F::zero() {
        0
    } else {
        level_of(m) + 1
    }
}

fn required_maximal_level<F: Real>(f: &TrigPolynomial<F>) -> u32 {
    level_of(f.max_abs_freq())
}

/// Terms grouped by [`level_of`], indexed `0..=top`.
fn buckets<F: Real>(f: &TrigPolynomial<F>, top: u32) -> Vec<Vec<Term<F>>> {
    let mut out = vec![Vec::new(); top as usize + 1];
    for t in f.terms() {
        out[level_of(t.freq).min(top) as usize].push(*t);
    }
    out
}

/// The `j`-th square-function summand `(S_j − R_j) f` as a polynomial.
fn square_piece<F: Real>(bucket: &[Term<F>], j: u32, m: &Mollifier<F>) -> TrigPolynomial<F> {
    TrigPolynomial::from_terms(bucket.iter().map(|t| {
        let w = F::one() - m.phi_hat_scaled(j as i32, t.freq);
        (t.freq, t.coeff * w)
    }))
}

/// `(Σ_{j=0}^{j_max} |S_j f(x) − R_j f(x)|²)^{1/2}`.
pub fn square_function<F: Real>(
    f: &TrigPolynomial<F>,
    j_max: u32,
    x: F,
    m: &Mollifier<F>,
) -> Result<F> {
    Ok(square_function_grid(f, j_max, x, F::one(), 1, m)?[0])
}

/// [`square_function`] on the grid `x0 + i·step`, `i < n`.
pub fn square_function_grid<F: Real>(
    f: &TrigPolynomial<F>,
    j_max: u32,
    x0: F,
    step: F,
    n: usize,
    m: &Mollifier<F>,
) -> Result<Vec<F>> {
    require_level(j_max, required_square_level(f))?;
    let mut acc = vec![F::zero(); n];
    for (j, bucket) in buckets(f, j_max).iter().enumerate() {
        if bucket.is_empty() {
            continue;
        }
        let piece = square_piece(bucket, j as u32, m);
        for (a, v) in acc.iter_mut().zip(piece.evaluate_grid(x0, step, n)) {
            *a = *a + v.norm_sqr();
        }
    }
    Ok(acc.into_iter().map(F::sqrt).collect())
}

/// `max_{0 <= j <= j_max} |S_j f(x)|`.
pub fn maximal_partial_sum<F: Real>(f: &TrigPolynomial<F>, j_max: u32, x: F) -> Result<F> {
    Ok(maximal_partial_sum_grid(f, j_max, x, F::one(), 1)?[0])
}

/// [`maximal_partial_sum`] on a grid, accumulating dyadic buckets as
/// prefix sums.
pub fn maximal_partial_sum_grid<F: Real>(
    f: &TrigPolynomial<F>,
    j_max: u32,
    x0: F,
    step: F,
    n: usize,
) -> Result<Vec<F>> {
    require_level(j_max, required_maximal_level(f))?;
    let zero = Complex::new(F::zero(), F::zero());
    let mut partial = vec![zero; n];
    let mut best = vec![F::zero(); n];
    for bucket in buckets(f, j_max) {
        if !bucket.is_empty() {
            let p = TrigPolynomial::from_terms(bucket.iter().map(|t| (t.freq, t.coeff)));
            for (s, v) in partial.iter_mut().zip(p.evaluate_grid(x0, step, n)) {
                *s = *s + v;
            }
        }
        for (b, s) in best.iter_mut().zip(&partial) {
            *b = b.max(s.norm());
        }
    }
    Ok(best)
}

/// `max_{0 <= j <= j_max} |R_j f|` on a grid.
pub fn smoothed_maximal_grid<F: Real>(
    f: &TrigPolynomial<F>,
    j_max: u32,
    x0: F,
    step: F,
    n: usize,
    m: &Mollifier<F>,
) -> Vec<F> {
    let mut best = vec![F::zero(); n];
    for j in 0..=j_max {
        let r = super::smoothed_partial_sum(f, DyadicLevel(j), m);
        for (b, v) in best.iter_mut().zip(r.evaluate_grid(x0, step, n)) {
            *b = b.max(v.norm());
        }
    }
    best
}
