//! Compactly supported frequency cutoff `φ̂` and its dyadic companion
//! `ψ̂ = φ̂(·/2) − φ̂`.
//!
//! Fourier convention: `φ̂(ξ) = ∫ φ(x) e^{−ixξ} dx`, so
//! `φ(x) = (1/2π) ∫ φ̂(ξ) e^{ixξ} dξ`.

use crate::error::Result;
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::Real;

/// Smooth step `h(t) = g(t) / (g(t) + g(1−t))` with `g(t) = e^{−1/t}` on
/// `t > 0`. Satisfies `h(t) + h(1−t) = 1`.
pub fn smooth_step<F: Real>(t: F) -> F {
    if t <= F::zero() {
        F::zero()
    } else if t >= F::one() {
        F::one()
    } else {
        let e = F::one() / t - F::one() / (F::one() - t);
        F::one() / (F::one() + e.exp())
    }
}

/// Even cutoff equal to 1 on `[−plateau, plateau]`, 0 outside `(−1, 1)`,
/// glued by [`smooth_step`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier<F> {
    plateau: F,
}

impl<F: Real> Default for Mollifier<F> {
    fn default() -> Self {
        Self {
            plateau: F::lit(0.5),
        }
    }
}

impl<F: Real> Mollifier<F> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Cutoff with a non-standard plateau half-width in `(0, 1)`. Only the
    /// default `1/2` satisfies the dyadic cutoff identity; other values exist
    /// for mutation testing.
    pub fn with_plateau(plateau: F) -> Self {
        assert!(plateau > F::zero() && plateau < F::one());
        Self { plateau }
    }

    pub fn plateau(&self) -> F {
        self.plateau
    }

    pub fn phi_hat(&self, xi: F) -> F {
        let a = xi.abs();
        if a <= self.plateau {
            F::one()
        } else if a >= F::one() {
            F::zero()
        } else {
            smooth_step((F::one() - a) / (F::one() - self.plateau))
        }
    }

    pub fn psi_hat(&self, xi: F) -> F {
        self.phi_hat(xi / F::lit(2.0)) - self.phi_hat(xi)
    }

    /// `φ̂(2^{−k} ξ)`.
    pub fn phi_hat_scaled(&self, k: i32, xi: F) -> F {
        self.phi_hat(xi * F::lit(2.0).powi(-k))
    }

    /// `ψ̂(2^{−k} ξ)`.
    pub fn psi_hat_scaled(&self, k: i32, xi: F) -> F {
        self.psi_hat(xi * F::lit(2.0).powi(-k))
    }

    /// Space-domain `φ(x) = (1/π) ∫_0^1 φ̂(ξ) cos(xξ) dξ`: the plateau part in
    /// closed form, the transition band by adaptive quadrature.
    pub fn phi_space(&self, x: F) -> Result<F> {
        let a = self.plateau;
        let plateau_part = if x == F::zero() { a } else { (a * x).sin() / x };
        let opts = QuadratureOptions::new(F::lit(1e-13))
            .with_rel_tol(F::lit(1e-12))
            .with_bandwidth(x.abs());
        let band = integrate(
            |xi: F| self.phi_hat(xi) * (x * xi).cos(),
            a,
            F::one(),
            &[],
            &opts,
        )?;
        Ok((plateau_part + band.value) / F::PI())
    }

    /// `ψ(x) = 2φ(2x) − φ(x)`.
    pub fn psi_space(&self, x: F) -> Result<F> {
        Ok(F::lit(2.0) * self.phi_space(F::lit(2.0) * x)? - self.phi_space(x)?)
    }
}
