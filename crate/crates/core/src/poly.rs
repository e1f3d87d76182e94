//! Trigonometric polynomials with arbitrary real frequencies.
//!
//! A [`TrigPolynomial`] stores `Σ c_n e^{iλ_n x}` as a list of terms sorted by
//! frequency. Frequencies closer than [`Real::freq_tol`] are merged on
//! construction, so the frequency list is always strictly increasing.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One `c e^{iλx}` term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term<F> {
    pub freq: F,
    pub coeff: Complex<F>,
}

impl<F: Real> Term<F> {
    pub fn new(freq: F, coeff: Complex<F>) -> Self {
        Self { freq, coeff }
    }
}

/// Strictly increasing list of frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyList<F>(Vec<F>);

impl<F: Real> FrequencyList<F> {
    /// Validates strict monotonicity (gaps must exceed the merge tolerance).
    pub fn new(freqs: Vec<F>) -> Result<Self> {
        if freqs.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidArgument("non-finite frequency".into()));
        }
        if freqs.windows(2).any(|w| w[1] - w[0] <= F::freq_tol()) {
            return Err(Error::InvalidArgument(
                "frequencies must be strictly increasing".into(),
            ));
        }
        Ok(Self(freqs))
    }

    pub fn as_slice(&self) -> &[F] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Minimum adjacent gap, `+∞` for fewer than two frequencies.
    pub fn separation(&self) -> SeparationConstant<F> {
        let gap = self
            .0
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(F::infinity(), F::min);
        SeparationConstant(gap)
    }
}

/// Minimum adjacent frequency gap of a polynomial (`+∞` when undefined).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SeparationConstant<F>(pub F);

impl<F: Real> SeparationConstant<F> {
    pub fn alpha(self) -> F {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `2π/α + 1`, the window-energy factor; equals 1 for an infinite gap.
    pub fn energy_factor(self) -> F {
        F::TAU() / self.0 + F::one()
    }
}

/// Half-length `T` of the symmetric averaging interval `[-T, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingWindow<F> {
    half_length: F,
}

impl<F: Real> AveragingWindow<F> {
    pub fn new(half_length: F) -> Result<Self> {
        if !(half_length > F::zero() && half_length.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "averaging half-length must be positive and finite, got {half_length}"
            )));
        }
        Ok(Self { half_length })
    }

    pub fn half_length(self) -> F {
        self.half_length
    }
}

/// Finite-window Fourier coefficient together with a certified distance to
/// the exact limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientEstimate<F> {
    pub value: Complex<F>,
    pub error_bound: F,
}

/// Finite trigonometric polynomial `Σ c_n e^{iλ_n x}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial<F> {
    terms: Vec<Term<F>>,
}

fn cmp_freq<F: Real>(a: &Term<F>, b: &Term<F>) -> Ordering {
    a.freq.partial_cmp(&b.freq).unwrap_or(Ordering::Equal)
}

/// Sorts and merges terms whose frequencies are within the tolerance of the
/// first frequency of their group.
fn normalize<F: Real>(mut terms: Vec<Term<F>>) -> Vec<Term<F>> {
    terms.sort_by(cmp_freq);
    let tol = F::freq_tol();
    let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
    let mut group_start = F::neg_infinity();
    for t in terms {
        match out.last_mut() {
            Some(last) if t.freq - group_start <= tol => last.coeff = last.coeff + t.coeff,
            _ => {
                group_start = t.freq;
                out.push(t);
            }
        }
    }
    out
}

impl<F: Real> TrigPolynomial<F> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Builds a polynomial from `(frequency, coefficient)` pairs. Frequencies
    /// must be finite; near-equal frequencies are merged by summing.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (F, Complex<F>)>,
    {
        let terms = terms.into_iter().map(|(f, c)| Term::new(f, c)).collect();
        Self {
            terms: normalize(terms),
        }
    }

    /// Like [`from_terms`](Self::from_terms) but rejects non-finite input.
    pub fn try_from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (F, Complex<F>)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms
            .iter()
            .any(|(f, c)| !f.is_finite() || !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidArgument(
                "polynomial terms must be finite".into(),
            ));
        }
        Ok(Self::from_terms(terms))
    }

    pub fn single(freq: F, coeff: Complex<F>) -> Self {
        Self {
            terms: vec![Term::new(freq, coeff)],
        }
    }

    /// Real-coefficient shorthand: `[(λ, a), ...]`.
    pub fn from_real_terms(terms: &[(F, F)]) -> Self {
        Self::from_terms(terms.iter().map(|&(f, a)| (f, Complex::new(a, F::zero()))))
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn frequencies(&self) -> FrequencyList<F> {
        FrequencyList(self.terms.iter().map(|t| t.freq).collect())
    }

    pub fn coefficients(&self) -> Vec<Complex<F>> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    /// `Σ |c_n|`, a uniform bound for `|f|`.
    pub fn coefficient_l1(&self) -> F {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// `Σ |c_n|²`.
    pub fn coefficient_l2_sq(&self) -> F {
        self.terms.iter().map(|t| t.coeff.norm_sqr()).sum()
    }

    /// `Σ |λ_n c_n|`, a uniform bound for `|f'|`.
    pub fn derivative_l1(&self) -> F {
        self.terms
            .iter()
            .map(|t| t.freq.abs() * t.coeff.norm())
            .sum()
    }

    pub fn max_abs_freq(&self) -> F {
        self.terms
            .iter()
            .map(|t| t.freq.abs())
            .fold(F::zero(), F::max)
    }

    /// `Σ c_n e^{iλ_n x}`.
    pub fn evaluate(&self, x: F) -> Complex<F> {
        self.terms
            .iter()
            .fold(Complex::new(F::zero(), F::zero()), |acc, t| {
                let (s, c) = (t.freq * x).sin_cos();
                acc + t.coeff * Complex::new(c, s)
            })
    }

    /// Evaluates on the uniform grid `x0 + i·step`, `i < n`, advancing each
    /// term by a phasor rotation and re-anchoring every 32 points.
    pub fn evaluate_grid(&self, x0: F, step: F, n: usize) -> Vec<Complex<F>> {
        const ANCHOR: usize = 32;
        let mut out = vec![Complex::new(F::zero(), F::zero()); n];
        let mut phase: Vec<Complex<F>> = Vec::with_capacity(self.terms.len());
        let rot: Vec<Complex<F>> = self
            .terms
            .iter()
            .map(|t| {
                let (s, c) = (t.freq * step).sin_cos();
                Complex::new(c, s)
            })
            .collect();
        for (i, slot) in out.iter_mut().enumerate() {
            if i % ANCHOR == 0 {
                let x = x0 + F::from_usize(i).unwrap() * step;
                phase.clear();
                phase.extend(self.terms.iter().map(|t| {
                    let (s, c) = (t.freq * x).sin_cos();
                    t.coeff * Complex::new(c, s)
                }));
            } else {
                for (p, r) in phase.iter_mut().zip(&rot) {
                    *p = *p * *r;
                }
            }
            *slot = phase
                .iter()
                .fold(Complex::new(F::zero(), F::zero()), |a, b| a + *b);
        }
        out
    }

    /// Exact Fourier coefficient at `lambda`: the matching term's coefficient
    /// or zero.
    pub fn fourier_coefficient_exact(&self, lambda: F) -> Result<Complex<F>> {
        let tol = F::freq_tol();
        let mut hits = self.terms.iter().filter(|t| (t.freq - lambda).abs() <= tol);
        match (hits.next(), hits.next()) {
            (None, _) => Ok(Complex::new(F::zero(), F::zero())),
            (Some(t), None) => Ok(t.coeff),
            (Some(_), Some(_)) => Err(Error::AmbiguousMatch(lambda.to_f64_lossy())),
        }
    }

    /// Closed-form `(1/2T)∫_{-T}^{T} f(x) e^{-iλx} dx` with the bound
    /// `Σ_{λ_n≠λ} |c_n| / (|λ_n − λ| T)` on its distance to the exact
    /// coefficient.
    pub fn fourier_coefficient_estimate(
        &self,
        lambda: F,
        window: AveragingWindow<F>,
    ) -> CoefficientEstimate<F> {
        let t_half = window.half_length();
        let tol = F::freq_tol();
        let mut value = Complex::new(F::zero(), F::zero());
        let mut bound = F::zero();
        for t in &self.terms {
            let delta = t.freq - lambda;
            if delta.abs() <= tol {
                value = value + t.coeff;
            } else {
                let arg = delta * t_half;
                value = value + t.coeff * (arg.sin() / arg);
                bound = bound + t.coeff.norm() / (delta.abs() * t_half);
            }
        }
        CoefficientEstimate {
            value,
            error_bound: bound,
        }
    }

    pub fn separation(&self) -> SeparationConstant<F> {
        self.frequencies().separation()
    }

    /// Shifts every frequency by `mu`: the result is `e^{iμx} f(x)`.
    pub fn modulate(&self, mu: F) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.freq + mu, t.coeff))
                .collect(),
        }
    }

    /// Pointwise product, i.e. the convolution of the coefficient sequences.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term::new(a.freq + b.freq, a.coeff * b.coeff));
            }
        }
        Self {
            terms: normalize(terms),
        }
    }

    /// Complex conjugate function: `(λ, c) ↦ (−λ, c̄)`.
    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .rev()
                .map(|t| Term::new(-t.freq, t.coeff.conj()))
                .collect(),
        }
    }

    /// `|f|²` as a (real-valued) polynomial.
    pub fn abs_sq(&self) -> Self {
        self.multiply(&self.conj())
    }

    pub fn scale(&self, s: Complex<F>) -> Self {
        self.map_coefficients(|_, c| c * s)
    }

    /// Replaces each coefficient by `g(λ_n, c_n)` and drops exact zeros.
    pub fn map_coefficients<G>(&self, mut g: G) -> Self
    where
        G: FnMut(F, Complex<F>) -> Complex<F>,
    {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.freq, g(t.freq, t.coeff)))
                .filter(|t| t.coeff.re != F::zero() || t.coeff.im != F::zero())
                .collect(),
        }
    }

    /// Drops terms with `|c| <= tol`.
    pub fn prune(&self, tol: F) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.coeff.norm() > tol)
                .collect(),
        }
    }

    /// Checks conjugate symmetry `c(−λ) = conj(c(λ))` with frequencies paired
    /// within the merge tolerance and coefficients within `coeff_tol`.
    pub fn check_real_valued(&self, coeff_tol: F) -> Result<()> {
        let tol = F::freq_tol();
        for t in &self.terms {
            let mirror = self
                .terms
                .iter()
                .find(|u| (u.freq + t.freq).abs() <= tol)
                .ok_or_else(|| {
                    Error::NotRealValued(format!("no mirror term for frequency {}", t.freq))
                })?;
            if (mirror.coeff - t.coeff.conj()).norm() > coeff_tol {
                return Err(Error::NotRealValued(format!(
                    "coefficient at {} is not the conjugate of its mirror",
                    t.freq
                )));
            }
        }
        Ok(())
    }

    pub fn is_real_valued(&self, coeff_tol: F) -> bool {
        self.check_real_valued(coeff_tol).is_ok()
    }

    /// Sum of two polynomials with merging.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            terms: normalize(self.terms.iter().chain(&other.terms).copied().collect()),
        }
    }
}

impl<F: Real> Add for &TrigPolynomial<F> {
    type Output = TrigPolynomial<F>;
    fn add(self, rhs: Self) -> TrigPolynomial<F> {
        TrigPolynomial::add(self, rhs)
    }
}

impl<F: Real> Sub for &TrigPolynomial<F> {
    type Output = TrigPolynomial<F>;
    fn sub(self, rhs: Self) -> TrigPolynomial<F> {
        TrigPolynomial::add(self, &-rhs)
    }
}

impl<F: Real> Neg for &TrigPolynomial<F> {
    type Output = TrigPolynomial<F>;
    fn neg(self) -> TrigPolynomial<F> {
        TrigPolynomial {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.freq, -t.coeff))
                .collect(),
        }
    }
}

impl<F: Real> Mul for &TrigPolynomial<F> {
    type Output = TrigPolynomial<F>;
    fn mul(self, rhs: Self) -> TrigPolynomial<F> {
        self.multiply(rhs)
    }
}

/// Wire format of one term: `{"freq":, "re":, "im":}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TermJson {
    pub freq: f64,
    pub re: f64,
    pub im: f64,
}

/// Wire format of a polynomial: `{"terms": [...]}` sorted by frequency.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub terms: Vec<TermJson>,
}

impl<F: Real> From<&TrigPolynomial<F>> for PolynomialJson {
    fn from(p: &TrigPolynomial<F>) -> Self {
        PolynomialJson {
            terms: p
                .terms
                .iter()
                .map(|t| TermJson {
                    freq: t.freq.to_f64_lossy(),
                    re: t.coeff.re.to_f64_lossy(),
                    im: t.coeff.im.to_f64_lossy(),
                })
                .collect(),
        }
    }
}

impl<F: Real> TryFrom<PolynomialJson> for TrigPolynomial<F> {
    type Error = Error;
    fn try_from(w: PolynomialJson) -> Result<Self> {
        TrigPolynomial::try_from_terms(
            w.terms
                .into_iter()
                .map(|t| (F::lit(t.freq), Complex::new(F::lit(t.re), F::lit(t.im)))),
        )
    }
}

impl<F: Real> Serialize for TrigPolynomial<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson::from(self).serialize(serializer)
    }
}

impl<'de, F: Real> Deserialize<'de> for TrigPolynomial<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = PolynomialJson::deserialize(deserializer)?;
        TrigPolynomial::try_from(wire).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type P = TrigPolynomial<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: Complex<f64>, b: Complex<f64>, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn evaluate_examples() {
        assert!(close(
            P::single(0.0, c(1.0, 0.0)).evaluate(17.3),
            c(1.0, 0.0),
            0.0
        ));
        assert!(close(
            P::single(1.0, c(2.0, 0.0)).evaluate(0.0),
            c(2.0, 0.0),
            0.0
        ));
        assert!(close(
            P::single(PI, c(1.0, 0.0)).evaluate(1.0),
            c(-1.0, 0.0),
            1e-15
        ));
        assert_eq!(P::zero().evaluate(3.0), c(0.0, 0.0));
    }

    #[test]
    fn grid_matches_direct_evaluation() {
        let f = P::from_terms([
            (0.3, c(1.0, -0.5)),
            (-7.1, c(0.2, 2.0)),
            (19.0, c(-1.0, 0.1)),
        ]);
        let grid = f.evaluate_grid(-3.0, 0.01, 500);
        for (i, v) in grid.iter().enumerate() {
            let x = -3.0 + i as f64 * 0.01;
            assert!(close(*v, f.evaluate(x), 1e-12), "i = {i}");
        }
    }

    #[test]
    fn exact_coefficients() {
        let f = P::from_real_terms(&[(2.0, 3.0), (-5.0, 4.0)]);
        assert_eq!(f.fourier_coefficient_exact(2.0).unwrap(), c(3.0, 0.0));
        assert_eq!(f.fourier_coefficient_exact(1.0).unwrap(), c(0.0, 0.0));
        assert_eq!(
            P::zero().fourier_coefficient_exact(0.0).unwrap(),
            c(0.0, 0.0)
        );
    }

    #[test]
    fn ambiguous_match_is_reported() {
        // 1e-9 apart pairwise-distinct after merging is impossible, so build
        // two terms 1.5e-9 apart and query halfway.
        let f = P::from_terms([(0.0, c(1.0, 0.0)), (1.5e-9, c(1.0, 0.0))]);
        assert_eq!(f.len(), 2);
        assert!(matches!(
            f.fourier_coefficient_exact(0.75e-9),
            Err(Error::AmbiguousMatch(_))
        ));
    }

    #[test]
    fn coefficient_estimate_examples() {
        let f = P::from_real_terms(&[(2.0, 3.0), (-5.0, 4.0)]);
        let est = f.fourier_coefficient_estimate(2.0, AveragingWindow::new(100.0).unwrap());
        assert!((est.error_bound - 4.0 / 700.0).abs() < 1e-15);
        assert!((est.value - c(3.0, 0.0)).norm() <= est.error_bound);

        let k = P::single(0.0, c(1.5, -2.0));
        let est = k.fourier_coefficient_estimate(0.0, AveragingWindow::new(3.7).unwrap());
        assert_eq!(est.value, c(1.5, -2.0));
        assert_eq!(est.error_bound, 0.0);

        let g = P::single(1.0, c(1.0, 0.0));
        let est = g.fourier_coefficient_estimate(0.0, AveragingWindow::new(PI).unwrap());
        assert!(est.value.norm() < 1e-15);
        assert!((est.error_bound - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn averaging_window_rejects_nonpositive() {
        assert!(AveragingWindow::new(0.0).is_err());
        assert!(AveragingWindow::new(f64::INFINITY).is_err());
    }

    #[test]
    fn separation_examples() {
        let f = P::from_real_terms(&[(-5.0, 1.0), (-2.0, 1.0), (2.0, 1.0), (5.0, 1.0)]);
        assert_eq!(f.separation().alpha(), 3.0);
        assert!(P::single(0.0, c(1.0, 0.0)).separation().is_infinite());
        assert!(P::zero().separation().is_infinite());
        let g = P::from_real_terms(&[(0.0, 1.0), (0.5, 1.0), (4.0, 1.0)]);
        assert_eq!(g.separation().alpha(), 0.5);
    }

    #[test]
    fn modulate_examples() {
        assert_eq!(
            P::single(2.0, c(1.0, 0.0)).modulate(3.0),
            P::single(5.0, c(1.0, 0.0))
        );
        let f = P::from_real_terms(&[(-1.0, 1.0), (1.0, 1.0)]);
        assert_eq!(f.modulate(0.0), f);
        assert_eq!(
            f.modulate(1.0),
            P::from_real_terms(&[(0.0, 1.0), (2.0, 1.0)])
        );
    }

    #[test]
    fn multiply_examples() {
        let a = P::single(1.0, c(1.0, 0.0));
        let b = P::single(-1.0, c(1.0, 0.0));
        assert_eq!(a.multiply(&b), P::single(0.0, c(1.0, 0.0)));
        let cosx = P::from_real_terms(&[(-1.0, 0.5), (1.0, 0.5)]);
        assert_eq!(
            cosx.multiply(&cosx),
            P::from_real_terms(&[(-2.0, 0.25), (0.0, 0.5), (2.0, 0.25)])
        );
        assert!(P::zero().multiply(&cosx).is_empty());
    }

    #[test]
    fn merge_within_tolerance() {
        let f = P::from_terms([(1.0, c(1.0, 0.0)), (1.0 + 5e-10, c(2.0, 0.0))]);
        assert_eq!(f.len(), 1);
        assert_eq!(f.terms()[0].coeff, c(3.0, 0.0));
    }

    #[test]
    fn real_valued_detection() {
        let cosx = P::from_real_terms(&[(-1.0, 0.5), (1.0, 0.5)]);
        assert!(cosx.is_real_valued(1e-12));
        let e = P::single(1.0, c(1.0, 0.0));
        assert!(matches!(
            e.check_real_valued(1e-12),
            Err(Error::NotRealValued(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let f = P::from_terms([(2.5, c(1.0, -2.0)), (-1.0, c(0.0, 0.5))]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"terms":[{"freq":-1.0,"re":0.0,"im":0.5},{"freq":2.5,"re":1.0,"im":-2.0}]}"#
        );
        let back: P = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn frequency_list_validation() {
        assert!(FrequencyList::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(FrequencyList::new(vec![0.0, f64::NAN]).is_err());
        assert_eq!(
            FrequencyList::new(vec![-1.0, 2.0])
                .unwrap()
                .separation()
                .alpha(),
            3.0
        );
    }

    #[test]
    fn generic_over_f32() {
        let f = TrigPolynomial::<f32>::from_real_terms(&[(-1.0, 0.5), (1.0, 0.5)]);
        let v = f.evaluate(0.3);
        assert!((v.re - 0.3f32.cos()).abs() < 1e-6);
        assert!(v.im.abs() < 1e-6);
    }
}
