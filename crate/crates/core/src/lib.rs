//! Almost-periodic Fourier analysis on trigonometric polynomials with
//! arbitrary real frequencies.
//!
//! The crate provides exact polynomial algebra ([`poly`]), certified
//! Stepanov-type norm estimates ([`norms`]), the dyadic cutoff pair
//! ([`mollifier`]), the frequency-multiplier operator family with slow
//! independent oracles ([`operators`]), a randomized certification suite
//! ([`verify`]) and the command-line experiments ([`harness`]).
//!
//! Numerical code is generic over [`Real`]; the `*64` aliases below fix the
//! scalar to `f64`, which is what the suite and CLI use.

// `!(x > 0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod mollifier;
pub mod norms;
pub mod operators;
pub mod poly;
pub mod quadrature;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use mollifier::Mollifier;
pub use norms::{NormEstimate, NormExponent};
pub use operators::FrequencyMultiplier;
pub use poly::{AveragingWindow, FrequencyList, SeparationConstant, Term, TrigPolynomial};
pub use scalar::Real;

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type TrigPolynomial64 = TrigPolynomial<f64>;
pub type Mollifier64 = Mollifier<f64>;
pub type NormEstimate64 = NormEstimate<f64>;
pub type NormExponent64 = NormExponent<f64>;
pub type FrequencyMultiplier64 = FrequencyMultiplier<f64>;
pub type TrigPolynomial32 = TrigPolynomial<f32>;
