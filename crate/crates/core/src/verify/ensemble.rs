//! Seeded random ensembles of separated polynomials.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::TrigPolynomial;

/// Recipe for a reproducible ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnsembleSpec {
    pub seed: u64,
    pub count: usize,
    pub terms_min: usize,
    pub terms_max: usize,
    /// Requested minimum adjacent gap.
    pub alpha: f64,
    pub freq_span: [f64; 2],
    pub coeff_scale: f64,
    pub real_valued: bool,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self {
            seed: 42,
            count: 500,
            terms_min: 1,
            terms_max: 20,
            alpha: 0.5,
            freq_span: [-40.0, 40.0],
            coeff_scale: 1.0,
            real_valued: true,
        }
    }
}

/// Independent stream for member `index` of the ensemble seeded by `seed`.
pub fn member_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub(crate) fn complex_gaussian<R: Rng>(rng: &mut R, scale: f64) -> Complex<f64> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(re, im) * (scale / std::f64::consts::SQRT_2)
}

/// `m` points in `[lo, hi]` with adjacent gaps `alpha + noise`, noise
/// exponential with mean `alpha/2`, shrunk to fit the interval.
pub(crate) fn separated_points<R: Rng>(
    rng: &mut R,
    m: usize,
    lo: f64,
    hi: f64,
    alpha: f64,
) -> Vec<f64> {
    if m == 0 {
        return Vec::new();
    }
    // Keeps rounding in the cumulative sum from eating into the gap.
    let gap = alpha * (1.0 + 1e-12);
    let slack = (hi - lo - (m - 1) as f64 * gap).max(0.0);
    let mut noise: Vec<f64> = (1..m)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            e * alpha * 0.5
        })
        .collect();
    let total: f64 = noise.iter().sum();
    if total > 0.9 * slack && total > 0.0 {
        let s = 0.9 * slack / total;
        noise.iter_mut().for_each(|e| *e *= s);
    }
    let used: f64 = noise.iter().sum();
    let mut x = lo + rng.random::<f64>() * (slack - used).max(0.0);
    let mut out = Vec::with_capacity(m);
    out.push(x);
    for e in noise {
        x += gap + e;
        out.push(x);
    }
    out
}

fn validate(spec: &EnsembleSpec) -> Result<()> {
    if spec.count == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let [a, b] = spec.freq_span;
    if !(spec.alpha > 0.0)
        || !(spec.coeff_scale > 0.0)
        || spec.terms_min == 0
        || spec.terms_min > spec.terms_max
        || !(a < b)
    {
        return Err(Error::InfeasibleSpec(format!(
            "invalid ensemble spec {spec:?}"
        )));
    }
    let room = if spec.real_valued {
        2.0 * (-a).min(b)
    } else {
        b - a
    };
    if spec.terms_max as f64 * spec.alpha > room {
        return Err(Error::InfeasibleSpec(format!(
            "{} terms at gap {} do not fit in a span of length {room}",
            spec.terms_max, spec.alpha
        )));
    }
    Ok(())
}

fn generate_member(spec: &EnsembleSpec, index: usize) -> TrigPolynomial<f64> {
    let mut rng = member_rng(spec.seed, index as u64);
    let n = rng.random_range(spec.terms_min..=spec.terms_max);
    let [a, b] = spec.freq_span;
    if !spec.real_valued {
        let freqs = separated_points(&mut rng, n, a, b, spec.alpha);
        return TrigPolynomial::from_terms(
            freqs
                .into_iter()
                .map(|l| (l, complex_gaussian(&mut rng, spec.coeff_scale)))
                .collect::<Vec<_>>(),
        );
    }
    let half = (-a).min(b);
    let with_zero = n % 2 == 1;
    let pairs = n / 2;
    // Keeps ±λ₁ (and 0 when present) at least alpha apart.
    let lo = if with_zero {
        spec.alpha
    } else {
        spec.alpha / 2.0
    };
    let positive = separated_points(&mut rng, pairs, lo, half, spec.alpha);
    let mut terms = Vec::with_capacity(n);
    if with_zero {
        let c: f64 = StandardNormal.sample(&mut rng);
        terms.push((0.0, Complex::new(c * spec.coeff_scale, 0.0)));
    }
    for l in positive {
        let c = complex_gaussian(&mut rng, spec.coeff_scale);
        terms.push((l, c));
        terms.push((-l, c.conj()));
    }
    TrigPolynomial::from_terms(terms)
}

/// Deterministic ensemble: member `i` depends only on `(seed, i)`.
/// Every member's separation is checked against `alpha` after generation.
pub fn generate_ensemble(spec: &EnsembleSpec) -> Result<Vec<TrigPolynomial<f64>>> {
    validate(spec)?;
    let members: Vec<_> = (0..spec.count)
        .into_par_iter()
        .map(|i| generate_member(spec, i))
        .collect();
    for (i, f) in members.iter().enumerate() {
        if f.separation().alpha() < spec.alpha {
            return Err(Error::InfeasibleSpec(format!(
                "member {i} has separation {} < {}",
                f.separation().alpha(),
                spec.alpha
            )));
        }
    }
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let spec = EnsembleSpec {
            count: 20,
            ..Default::default()
        };
        assert_eq!(
            generate_ensemble(&spec).unwrap(),
            generate_ensemble(&spec).unwrap()
        );
    }

    #[test]
    fn separation_and_symmetry() {
        for real_valued in [false, true] {
            let spec = EnsembleSpec {
                count: 50,
                alpha: 2.0,
                real_valued,
                ..Default::default()
            };
            for f in generate_ensemble(&spec).unwrap() {
                assert!(f.separation().alpha() >= 2.0);
                assert!((1..=20).contains(&f.len()));
                if real_valued {
                    f.check_real_valued(0.0).unwrap();
                }
            }
        }
    }

    #[test]
    fn errors() {
        let empty = EnsembleSpec {
            count: 0,
            ..Default::default()
        };
        assert_eq!(generate_ensemble(&empty), Err(Error::EmptyEnsemble));
        let crowded = EnsembleSpec {
            alpha: 5.0,
            ..Default::default()
        };
        assert!(matches!(
            generate_ensemble(&crowded),
            Err(Error::InfeasibleSpec(_))
        ));
    }

    #[test]
    fn tight_packing_still_separated() {
        let spec = EnsembleSpec {
            count: 30,
            terms_min: 20,
            terms_max: 20,
            alpha: 4.0,
            real_valued: false,
            ..Default::default()
        };
        for f in generate_ensemble(&spec).unwrap() {
            assert_eq!(f.len(), 20);
            assert!(f.separation().alpha() >= 4.0);
            assert!(f.max_abs_freq() <= 40.0);
        }
    }
}
