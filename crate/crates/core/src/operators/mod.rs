//! Frequency multipliers on trigonometric polynomials and the operators
//! built from them, with slow independent oracles.

mod maximal;
mod oracles;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mollifier::Mollifier;
use crate::poly::TrigPolynomial;
use crate::scalar::Real;

pub use maximal::{
    maximal_partial_sum, maximal_partial_sum_grid, required_square_level, smoothed_maximal_grid,
    square_function, square_function_grid,
};
pub use oracles::{
    direct_convolution_oracle, hilbert_indicator_function, principal_value, pv_hilbert_indicator,
    pv_hilbert_indicator_quadrature, sequence_hilbert, sequence_hilbert_with, KernelPiece,
    SelfTerm,
};

type Symbol<F> = dyn Fn(F) -> Complex<F> + Send + Sync;

/// A map `λ ↦ m(λ)` acting on polynomials by `(λ_n, c_n) ↦ (λ_n, m(λ_n) c_n)`.
#[derive(Clone)]
pub struct FrequencyMultiplier<F> {
    symbol: Arc<Symbol<F>>,
    tag: String,
}

impl<F: Real> fmt::Debug for FrequencyMultiplier<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("FrequencyMultiplier")
            .field(&self.tag)
            .finish()
    }
}

impl<F: Real> FrequencyMultiplier<F> {
    pub fn new<S>(tag: impl Into<String>, symbol: S) -> Self
    where
        S: Fn(F) -> Complex<F> + Send + Sync + 'static,
    {
        Self {
            symbol: Arc::new(symbol),
            tag: tag.into(),
        }
    }

    /// Real-valued symbol.
    pub fn real<S>(tag: impl Into<String>, symbol: S) -> Self
    where
        S: Fn(F) -> F + Send + Sync + 'static,
    {
        Self::new(tag, move |l| Complex::new(symbol(l), F::zero()))
    }

    pub fn identity() -> Self {
        Self::real("I", |_| F::one())
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn symbol(&self, lambda: F) -> Complex<F> {
        (self.symbol)(lambda)
    }

    /// Scales each coefficient by the symbol; zero products are dropped.
    pub fn apply(&self, f: &TrigPolynomial<F>) -> TrigPolynomial<F> {
        f.map_coefficients(|l, c| (self.symbol)(l) * c)
    }

    /// The multiplier with symbol `self(λ)·other(λ)`.
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (self.symbol.clone(), other.symbol.clone());
        Self {
            symbol: Arc::new(move |l| a(l) * b(l)),
            tag: format!("{}∘{}", self.tag, other.tag),
        }
    }

    /// `−i·sgn(λ)` with `sgn(0) = 0`.
    pub fn hilbert() -> Self {
        Self::new("H", |l: F| {
            let s = if l > F::zero() {
                F::one()
            } else if l < F::zero() {
                -F::one()
            } else {
                F::zero()
            };
            Complex::new(F::zero(), -s)
        })
    }

    /// `−i·sgn_±(λ)`.
    pub fn hilbert_pm(variant: SignVariant, convention: SignConvention) -> Self {
        let tag = match variant {
            SignVariant::Plus => "H+",
            SignVariant::Minus => "H-",
        };
        Self::new(tag, move |l: F| {
            Complex::new(F::zero(), -convention.sgn(variant, l))
        })
    }

    /// `χ_{[−2^j, 2^j]}`, boundary included.
    pub fn dyadic(j: DyadicLevel) -> Self {
        let cut = j.cutoff::<F>();
        Self::real(format!("S_{}", j.0), move |l: F| {
            if l.abs() <= cut {
                F::one()
            } else {
                F::zero()
            }
        })
    }

    /// `φ̂(2^{−j} λ)`.
    pub fn smoothed(j: DyadicLevel, m: Mollifier<F>) -> Self {
        let k = j.0 as i32;
        Self::real(format!("R_{}", j.0), move |l| m.phi_hat_scaled(k, l))
    }

    /// `ψ̂(2^{−k} λ)`.
    pub fn lp_piece(k: i32, m: Mollifier<F>) -> Self {
        Self::real(format!("psi_{k}"), move |l| m.psi_hat_scaled(k, l))
    }
}

/// Dyadic level `j` with cutoff `2^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicLevel(pub u32);

impl DyadicLevel {
    pub fn cutoff<F: Real>(self) -> F {
        F::lit(2.0).powi(self.0 as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignVariant {
    Plus,
    Minus,
}

/// Values of `sgn_±` at the origin. The default is `sgn₊(0) = 1`,
/// `sgn₋(0) = −1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignConvention {
    pub plus_at_zero: i8,
    pub minus_at_zero: i8,
}

impl Default for SignConvention {
    fn default() -> Self {
        Self {
            plus_at_zero: 1,
            minus_at_zero: -1,
        }
    }
}

impl SignConvention {
    pub fn sgn<F: Real>(self, variant: SignVariant, x: F) -> F {
        if x > F::zero() {
            F::one()
        } else if x < F::zero() {
            -F::one()
        } else {
            let v = match variant {
                SignVariant::Plus => self.plus_at_zero,
                SignVariant::Minus => self.minus_at_zero,
            };
            F::from_i8(v).unwrap()
        }
    }
}

pub fn apply_multiplier<F: Real>(
    m: &FrequencyMultiplier<F>,
    f: &TrigPolynomial<F>,
) -> TrigPolynomial<F> {
    m.apply(f)
}

/// `S_j f = Σ_{|λ_n| <= 2^j} c_n e^{iλ_n x}`.
pub fn dyadic_partial_sum<F: Real>(f: &TrigPolynomial<F>, j: DyadicLevel) -> TrigPolynomial<F> {
    FrequencyMultiplier::dyadic(j).apply(f)
}

/// `R_j f`, multiplier `φ̂(2^{−j} λ)`.
pub fn smoothed_partial_sum<F: Real>(
    f: &TrigPolynomial<F>,
    j: DyadicLevel,
    m: &Mollifier<F>,
) -> TrigPolynomial<F> {
    FrequencyMultiplier::smoothed(j, *m).apply(f)
}

/// Littlewood-Paley piece, multiplier `ψ̂(2^{−k} λ)`.
pub fn lp_piece<F: Real>(f: &TrigPolynomial<F>, k: i32, m: &Mollifier<F>) -> TrigPolynomial<F> {
    FrequencyMultiplier::lp_piece(k, *m).apply(f)
}

/// All nonzero Littlewood-Paley pieces of `f`, `k ∈ ℤ` ascending. Each
/// nonzero frequency meets at most two pieces.
pub fn littlewood_paley_pieces<F: Real>(
    f: &TrigPolynomial<F>,
    m: &Mollifier<F>,
) -> Vec<(i32, TrigPolynomial<F>)> {
    let mut bands: BTreeMap<i32, Vec<(F, Complex<F>)>> = BTreeMap::new();
    for t in f.terms() {
        if t.freq == F::zero() {
            continue;
        }
        let centre = t.freq.abs().log2().floor().to_i32().unwrap_or(0);
        for k in centre - 1..=centre + 2 {
            let w = m.psi_hat_scaled(k, t.freq);
            if w != F::zero() {
                bands.entry(k).or_default().push((t.freq, t.coeff * w));
            }
        }
    }
    bands
        .into_iter()
        .map(|(k, terms)| (k, TrigPolynomial::from_terms(terms)))
        .collect()
}

pub fn hilbert<F: Real>(f: &TrigPolynomial<F>) -> TrigPolynomial<F> {
    FrequencyMultiplier::hilbert().apply(f)
}

pub fn hilbert_pm<F: Real>(f: &TrigPolynomial<F>, variant: SignVariant) -> TrigPolynomial<F> {
    hilbert_pm_with(f, variant, SignConvention::default())
}

pub fn hilbert_pm_with<F: Real>(
    f: &TrigPolynomial<F>,
    variant: SignVariant,
    convention: SignConvention,
) -> TrigPolynomial<F> {
    FrequencyMultiplier::hilbert_pm(variant, convention).apply(f)
}

/// Number of grid points used by [`hilbert_identity_check`].
pub const IDENTITY_GRID_POINTS: usize = 1000;

/// Max over a 1000-point grid on `[−50, 50)` of
/// `|(H±f)² − f² − 2H±(f·H±f)|`. `f` must be real-valued.
pub fn hilbert_identity_check<F: Real>(f: &TrigPolynomial<F>, variant: SignVariant) -> Result<F> {
    hilbert_identity_check_with(f, variant, SignConvention::default())
}

pub fn hilbert_identity_check_with<F: Real>(
    f: &TrigPolynomial<F>,
    variant: SignVariant,
    convention: SignConvention,
) -> Result<F> {
    let scale = f.coefficient_l1();
    f.check_real_valued(F::lit(1e-12) * (scale + F::one()))?;
    let hf = hilbert_pm_with(f, variant, convention);
    let lhs = hf.multiply(&hf);
    let f2 = f.multiply(f);
    let cross = hilbert_pm_with(&f.multiply(&hf), variant, convention);
    let x0 = F::lit(-50.0);
    let step = F::lit(0.1);
    let n = IDENTITY_GRID_POINTS;
    let l = lhs.evaluate_grid(x0, step, n);
    let a = f2.evaluate_grid(x0, step, n);
    let b = cross.evaluate_grid(x0, step, n);
    let two = F::lit(2.0);
    Ok(l.iter()
        .zip(&a)
        .zip(&b)
        .map(|((l, a), b)| (*l - *a - *b * two).norm())
        .fold(F::zero(), F::max))
}

/// `(i/2)[e^{−i2^j x} H₊(e^{i2^j ·} f) − e^{i2^j x} H₋(e^{−i2^j ·} f)]`.
pub fn sj_via_modulation<F: Real>(f: &TrigPolynomial<F>, j: DyadicLevel) -> TrigPolynomial<F> {
    sj_via_modulation_with(f, j, SignConvention::default())
}

pub fn sj_via_modulation_with<F: Real>(
    f: &TrigPolynomial<F>,
    j: DyadicLevel,
    convention: SignConvention,
) -> TrigPolynomial<F> {
    let c = j.cutoff::<F>();
    let plus = hilbert_pm_with(&f.modulate(c), SignVariant::Plus, convention).modulate(-c);
    let minus = hilbert_pm_with(&f.modulate(-c), SignVariant::Minus, convention).modulate(c);
    let half_i = Complex::new(F::zero(), F::lit(0.5));
    // Coefficients that cancel to exactly zero carry no term.
    (&plus - &minus).map_coefficients(|_, v| v * half_i)
}

/// Term-by-term distance: `max_n |c_n(f) − c_n(g)|` over the union of
/// frequencies, matching within the merge tolerance.
pub fn coefficient_distance<F: Real>(f: &TrigPolynomial<F>, g: &TrigPolynomial<F>) -> F {
    (f - g)
        .terms()
        .iter()
        .map(|t| t.coeff.norm())
        .fold(F::zero(), F::max)
}

/// Error helper for level preconditions.
pub(crate) fn require_level(j_max: u32, required: u32) -> Result<()> {
    if j_max < required {
        Err(Error::JMaxTooSmall { j_max, required })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = TrigPolynomial<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn multiplier_examples() {
        let k = P::single(0.0, c(2.0, 1.0));
        assert!(hilbert(&k).is_empty());
        let hp = hilbert_pm(&k, SignVariant::Plus);
        assert_eq!(hp.terms()[0].coeff, c(2.0, 1.0) * c(0.0, -1.0));
        let hm = hilbert_pm(&k, SignVariant::Minus);
        assert_eq!(hm.terms()[0].coeff, c(2.0, 1.0) * c(0.0, 1.0));
        let f = P::from_real_terms(&[(-1.0, 0.5), (2.0, 3.0)]);
        assert_eq!(FrequencyMultiplier::identity().apply(&f), f);
    }

    #[test]
    fn dyadic_examples() {
        let f = P::from_real_terms(&[(3.0, 1.0), (5.0, 1.0)]);
        assert_eq!(
            dyadic_partial_sum(&f, DyadicLevel(2)),
            P::from_real_terms(&[(3.0, 1.0)])
        );
        assert_eq!(dyadic_partial_sum(&f, DyadicLevel(3)), f);
        let b = P::from_real_terms(&[(4.0, 1.0)]);
        assert_eq!(dyadic_partial_sum(&b, DyadicLevel(2)), b);
    }

    #[test]
    fn smoothed_examples() {
        let m = Mollifier::new();
        let one = P::from_real_terms(&[(1.0, 1.0)]);
        assert_eq!(smoothed_partial_sum(&one, DyadicLevel(1), &m), one);
        let five = P::from_real_terms(&[(5.0, 1.0)]);
        assert!(smoothed_partial_sum(&five, DyadicLevel(2), &m).is_empty());
        let three = P::from_real_terms(&[(3.0, 1.0)]);
        let r = smoothed_partial_sum(&three, DyadicLevel(2), &m);
        assert_eq!(r.terms()[0].coeff, c(0.5, 0.0));
    }

    #[test]
    fn hilbert_of_cosine_is_sine() {
        let f = P::from_real_terms(&[(-1.0, 0.5), (1.0, 0.5)]);
        for v in [SignVariant::Plus, SignVariant::Minus] {
            let h = hilbert_pm(&f, v);
            for i in 0..50 {
                let x = -3.0 + 0.17 * i as f64;
                assert!((h.evaluate(x) - c(x.sin(), 0.0)).norm() < 1e-15);
            }
        }
        assert!(hilbert_pm(&P::zero(), SignVariant::Plus).is_empty());
    }

    #[test]
    fn identity_examples() {
        let cos = P::from_real_terms(&[(-1.0, 0.5), (1.0, 0.5)]);
        let one = P::from_real_terms(&[(0.0, 1.0)]);
        for v in [SignVariant::Plus, SignVariant::Minus] {
            assert!(hilbert_identity_check(&cos, v).unwrap() <= 1e-12);
            assert!(hilbert_identity_check(&one, v).unwrap() <= 1e-15);
            assert_eq!(hilbert_identity_check(&P::zero(), v).unwrap(), 0.0);
        }
        let complex = P::from_real_terms(&[(1.0, 1.0)]);
        assert!(matches!(
            hilbert_identity_check(&complex, SignVariant::Plus),
            Err(Error::NotRealValued(_))
        ));
    }

    #[test]
    fn modulation_examples() {
        let j = DyadicLevel(2);
        for (lam, kept) in [
            (3.0, true),
            (5.0, false),
            (4.0, true),
            (-4.0, true),
            (-4.5, false),
        ] {
            let f = P::from_real_terms(&[(lam, 1.0)]);
            let g = sj_via_modulation(&f, j);
            assert!(coefficient_distance(&g, &dyadic_partial_sum(&f, j)) < 1e-15);
            assert_eq!(g.len(), kept as usize, "λ = {lam}");
        }
    }

    #[test]
    fn flipped_minus_sign_drops_boundary() {
        let f = P::from_real_terms(&[(4.0, 1.0)]);
        let bad = SignConvention {
            plus_at_zero: 1,
            minus_at_zero: 1,
        };
        let g = sj_via_modulation_with(&f, DyadicLevel(2), bad);
        assert!(coefficient_distance(&g, &f) > 0.5);
    }

    #[test]
    fn lp_examples() {
        let m = Mollifier::new();
        assert!(lp_piece(&P::from_real_terms(&[(0.0, 2.0)]), 3, &m).is_empty());
        let f = P::from_real_terms(&[(8.0, 1.0)]);
        assert_eq!(lp_piece(&f, 3, &m).terms()[0].coeff, c(1.0, 0.0));
    }

    #[test]
    fn lp_pieces_sum_to_identity_off_zero() {
        let m = Mollifier::new();
        let f = P::from_terms([
            (-37.0, c(0.3, 0.1)),
            (0.0, c(2.0, 0.0)),
            (0.013, c(1.0, -1.0)),
            (1.0, c(0.5, 0.0)),
            (6.2, c(-0.2, 0.7)),
        ]);
        let pieces = littlewood_paley_pieces(&f, &m);
        let total = pieces.iter().fold(P::zero(), |acc, (_, p)| acc.add(p));
        let expect = f.map_coefficients(|l, c| if l == 0.0 { Complex::new(0.0, 0.0) } else { c });
        assert!(coefficient_distance(&total, &expect) < 1e-15);
        for (k, p) in &pieces {
            assert_eq!(p, &lp_piece(&f, *k, &m));
        }
    }

    #[test]
    fn composition_multiplies_symbols() {
        let m = Mollifier::new();
        let a = FrequencyMultiplier::smoothed(DyadicLevel(2), m);
        let b = FrequencyMultiplier::hilbert();
        let f = P::from_real_terms(&[(-3.0, 1.0), (0.5, 2.0), (2.0, -1.0)]);
        assert_eq!(b.apply(&a.apply(&f)), a.compose(&b).apply(&f));
        assert_eq!(a.compose(&b).tag(), "R_2∘H");
    }
}
