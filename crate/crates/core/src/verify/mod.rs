//! Randomized certification suite.
//!
//! Explicit-constant inequalities are asserted with norm error radii added
//! on the favourable side. Ratios without a known constant are reported and
//! only required to be finite and stable across seeds.

mod checks;
mod ensemble;
mod report;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use checks::grid_stepanov;
pub use ensemble::{generate_ensemble, member_rng, EnsembleSpec};
pub use report::{CheckRecord, VerificationReport};

/// Explicit constants for the `H±` chain on `S^{2^k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoreticalConstants {
    pub alpha: f64,
    /// `b[0]` is `B[1]`.
    b: Vec<f64>,
}

impl TheoreticalConstants {
    /// `B[k]` for `1 <= k <= k_max`.
    pub fn b(&self, k: u32) -> f64 {
        self.b[k as usize - 1]
    }

    pub fn k_max(&self) -> u32 {
        self.b.len() as u32
    }
}

/// `B[1] = √(2π/α + 1)`, `B[k+1] = B[k] + √(B[k]² + 1)`.
pub fn constants(alpha: f64, k_max: u32) -> Result<TheoreticalConstants> {
    if !(alpha > 0.0) || k_max == 0 {
        return Err(Error::InvalidArgument(format!(
            "constants need alpha > 0 and k_max >= 1, got {alpha}, {k_max}"
        )));
    }
    let mut b = vec![(std::f64::consts::TAU / alpha + 1.0).sqrt()];
    for _ in 1..k_max {
        let last = *b.last().unwrap();
        b.push(last + (last * last + 1.0).sqrt());
    }
    Ok(TheoreticalConstants { alpha, b })
}

/// Deliberate defects used to show that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    #[default]
    None,
    /// `sgn₋(0) = +1`.
    FlipMinusSign,
    /// Cutoff plateau `[−0.4, 0.4]`.
    ShrinkPlateau,
    /// Kernel sum keeps the `k = j` term.
    IncludeSelfTerm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub ensemble: EnsembleSpec,
    /// Stepanov search window.
    pub window: [f64; 2],
    pub grid_step: f64,
    /// Dyadic exponents `k` for the `S^{2^k}` checks.
    pub k_levels: Vec<u32>,
    /// Overrides the per-polynomial level for the maximal checks.
    pub j_max: Option<u32>,
    /// Multiplies every numerical (not theoretical) tolerance.
    pub tolerance_scale: f64,
    pub families: usize,
    pub family_size: usize,
    pub family_terms: usize,
    pub family_alpha: f64,
    pub sequences: usize,
    pub sequence_len: usize,
    pub convolution_cases: usize,
    pub stability_seeds: usize,
    pub stability_tolerance: f64,
    pub converge_n: u32,
    pub amalgam_n_max: i64,
    pub mutation: Mutation,
    /// Check groups to run; empty runs all of them.
    pub only: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            ensemble: EnsembleSpec::default(),
            window: [0.0, 64.0],
            grid_step: 1.0 / 32.0,
            k_levels: vec![1, 2],
            j_max: None,
            tolerance_scale: 1.0,
            families: 100,
            family_size: 8,
            family_terms: 12,
            family_alpha: 1.0,
            sequences: 1000,
            sequence_len: 200,
            convolution_cases: 50,
            stability_seeds: 5,
            stability_tolerance: 0.10,
            converge_n: 20,
            amalgam_n_max: 1024,
            mutation: Mutation::None,
            only: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn seed(&self) -> u64 {
        self.ensemble.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.ensemble.seed = seed;
        self
    }

    pub fn with_mutation(mut self, mutation: Mutation) -> Self {
        self.mutation = mutation;
        self
    }
}

/// Names accepted by [`SuiteConfig::only`].
pub fn check_groups() -> impl Iterator<Item = &'static str> {
    checks::group_names()
}

/// Runs every selected check. Failures inside a check become failed records; only an
/// empty ensemble aborts the run.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    if config.ensemble.count == 0 {
        return Err(Error::EmptyEnsemble);
    }
    if let Some(bad) = config
        .only
        .iter()
        .find(|n| !check_groups().any(|g| g == n.as_str()))
    {
        return Err(Error::InvalidArgument(format!(
            "unknown check group {bad:?}"
        )));
    }
    Ok(VerificationReport::new(config.seed(), checks::all(config)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_examples() {
        let c = constants(std::f64::consts::TAU, 2).unwrap();
        assert!((c.b(1) - 2f64.sqrt()).abs() < 1e-15);
        assert!((c.b(2) - (2f64.sqrt() + 3f64.sqrt())).abs() < 1e-15);
        let big = constants(1e12, 1).unwrap();
        assert!((big.b(1) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unit_separation_constants() {
        let c = constants(1.0, 2).unwrap();
        assert!((c.b(1) - 2.698737).abs() < 1e-6);
        assert!((c.b(2) - 5.576790).abs() < 1e-6);
    }

    #[test]
    fn chain_monotone() {
        let a = constants(0.5, 4).unwrap();
        let b = constants(2.0, 4).unwrap();
        for k in 1..4 {
            assert!(a.b(k + 1) > a.b(k));
            assert!(a.b(k) > b.b(k));
        }
    }

    #[test]
    fn empty_ensemble() {
        let mut cfg = SuiteConfig::default();
        cfg.ensemble.count = 0;
        assert_eq!(run_suite(&cfg), Err(Error::EmptyEnsemble));
    }

    #[test]
    fn selected_groups() {
        let cfg = SuiteConfig {
            only: vec!["sign_identity".into(), "lacunary".into()],
            ..Default::default()
        };
        let r = run_suite(&cfg).unwrap();
        let names: Vec<_> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "lacunary_convergence",
                "lacunary_full_retention",
                "lacunary_monotone",
                "sign_identity"
            ]
        );
        assert!(r.pass);
        let bad = SuiteConfig {
            only: vec!["nope".into()],
            ..Default::default()
        };
        assert!(matches!(run_suite(&bad), Err(Error::InvalidArgument(_))));
    }
}
