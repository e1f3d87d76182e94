//! Slow reference computations: the discrete Hilbert-type kernel sum,
//! convolution against the space-domain mollifier, and principal values.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mollifier::Mollifier;
use crate::norms::SampledFunction;
use crate::poly::{FrequencyList, TrigPolynomial};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::Real;

/// Whether the `k = j` term of the kernel sum is skipped. `Include` exists
/// only to exercise the certification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfTerm {
    #[default]
    Exclude,
    Include,
}

/// `(Ta)_j = Σ_{k≠j} a_k / (λ_j − λ_k)`.
pub fn sequence_hilbert<F: Real>(
    freqs: &FrequencyList<F>,
    a: &[Complex<F>],
) -> Result<Vec<Complex<F>>> {
    sequence_hilbert_with(freqs, a, SelfTerm::Exclude)
}

pub fn sequence_hilbert_with<F: Real>(
    freqs: &FrequencyList<F>,
    a: &[Complex<F>],
    self_term: SelfTerm,
) -> Result<Vec<Complex<F>>> {
    let lam = freqs.as_slice();
    if lam.len() != a.len() {
        return Err(Error::InvalidArgument(format!(
            "{} frequencies but {} sequence values",
            lam.len(),
            a.len()
        )));
    }
    let support: Vec<usize> = (0..a.len())
        .filter(|&k| a[k] != Complex::new(F::zero(), F::zero()))
        .collect();
    let zero = Complex::new(F::zero(), F::zero());
    Ok(lam
        .iter()
        .enumerate()
        .map(|(j, &lj)| {
            support.iter().fold(zero, |acc, &k| {
                if k == j && self_term == SelfTerm::Exclude {
                    acc
                } else {
                    acc + a[k] / Complex::new(lj - lam[k], F::zero())
                }
            })
        })
        .collect())
}

/// Which kernel [`direct_convolution_oracle`] convolves with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPiece {
    /// `φ_k = 2^k φ(2^k ·)`, multiplier `φ̂(2^{−k} λ)`.
    Phi,
    /// `ψ_k = 2^k ψ(2^k ·)`, multiplier `ψ̂(2^{−k} λ)`.
    Psi,
}

/// `∫_{−R}^{R} f(x − y) κ_k(y) dy` by quadrature, with `κ_k` evaluated from
/// the space-domain mollifier.
pub fn direct_convolution_oracle<F: Real>(
    f: &TrigPolynomial<F>,
    m: &Mollifier<F>,
    which: KernelPiece,
    k: i32,
    x: F,
    truncation: F,
) -> Result<Complex<F>> {
    if !(truncation > F::zero()) {
        return Err(Error::InvalidArgument(
            "truncation radius must be positive".into(),
        ));
    }
    // y = 2^{−k} u turns 2^k κ(2^k y) dy into κ(u) du.
    let scale = F::lit(2.0).powi(-k);
    let r = truncation / scale;
    let kernel = |u: F| -> Result<F> {
        match which {
            KernelPiece::Phi => m.phi_space(u),
            KernelPiece::Psi => m.psi_space(u),
        }
    };
    let kernel_band = match which {
        KernelPiece::Phi => F::one(),
        KernelPiece::Psi => F::lit(2.0),
    };
    let tol = F::lit(1e-9) * f.coefficient_l1().max(F::epsilon());
    let opts = QuadratureOptions::new(tol).with_bandwidth(f.max_abs_freq() * scale + kernel_band);
    let failure = std::cell::Cell::new(None);
    let q = integrate(
        |u: F| match kernel(u) {
            Ok(w) => f.evaluate(x - u * scale) * w,
            Err(e) => {
                failure.set(Some(e));
                Complex::new(F::zero(), F::zero())
            }
        },
        -r,
        r,
        &[],
        &opts,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(q.value),
    }
}

/// `p.v. ∫_a^b g(y) / (x − y) dy`. For `x ∈ (a, b)` the symmetric part
/// `[x − d, x + d]` is folded into `∫_0^d (g(x−t) − g(x+t)) / t dt`.
pub fn principal_value<F, G>(g: G, a: F, b: F, x: F, opts: &QuadratureOptions<F>) -> Result<F>
where
    F: Real,
    G: Fn(F) -> F,
{
    if x == a || x == b {
        return Err(Error::SingularPoint(x.to_f64_lossy()));
    }
    let direct = |lo: F, hi: F| -> Result<F> {
        Ok(integrate(|y: F| g(y) / (x - y), lo, hi, &[], opts)?.value)
    };
    if x < a || x > b {
        return direct(a, b);
    }
    let d = (x - a).min(b - x);
    let folded = integrate(|t: F| (g(x - t) - g(x + t)) / t, F::zero(), d, &[], opts)?.value;
    let rest = if x - a > d {
        direct(a, x - d)?
    } else if b - x > d {
        direct(x + d, b)?
    } else {
        F::zero()
    };
    Ok(folded + rest)
}

fn check_indicator_point<F: Real>(x: F) -> Result<()> {
    if x == F::zero() || x == F::one() {
        Err(Error::SingularPoint(x.to_f64_lossy()))
    } else {
        Ok(())
    }
}

/// `H(χ_{[0,1]})(x) = (1/π) ln(|x| / |x − 1|)`.
pub fn pv_hilbert_indicator<F: Real>(x: F) -> Result<F> {
    check_indicator_point(x)?;
    Ok((x.abs() / (x - F::one()).abs()).ln() / F::PI())
}

/// The same value by principal-value quadrature of `(1/π)∫_0^1 dy/(x − y)`.
pub fn pv_hilbert_indicator_quadrature<F: Real>(x: F) -> Result<F> {
    check_indicator_point(x)?;
    let opts = QuadratureOptions::new(F::lit(1e-13)).with_rel_tol(F::lit(1e-13));
    Ok(principal_value(|_| F::one(), F::zero(), F::one(), x, &opts)? / F::PI())
}

/// `H(χ_{[0,1]})` as a sampled function with its logarithmic singularities
/// declared as breakpoints.
pub fn hilbert_indicator_function<F: Real>() -> SampledFunction<F> {
    SampledFunction::new(|x: F| {
        if x == F::zero() || x == F::one() {
            F::infinity()
        } else {
            (x.abs() / (x - F::one()).abs()).ln() / F::PI()
        }
    })
    .with_breakpoints(vec![F::zero(), F::one()])
}
