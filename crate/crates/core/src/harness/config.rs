use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verify::{Mutation, SuiteConfig};

pub const SEED_ENV: &str = "STEPLAB_SEED";

/// Everything a CLI run can be told. Config files use these field names;
/// `suite` holds the verification knobs, including the ensemble recipe.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Informational; the subcommand on the command line wins.
    pub subcommand: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub suite: SuiteConfig,
}

/// Flag values that override a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub grid_step: Option<f64>,
    pub window: Option<[f64; 2]>,
    pub j_max: Option<u32>,
    pub k_levels: Option<Vec<u32>>,
    pub tolerance_scale: Option<f64>,
    pub count: Option<usize>,
    pub mutation: Option<Mutation>,
    pub only: Option<Vec<String>>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// File values, then flags, then `STEPLAB_SEED`.
    pub fn resolve(file: Option<&Path>, flags: &Overrides, env_seed: Option<&str>) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.apply(flags);
        if let Some(s) = env_seed {
            let seed = s.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))
            })?;
            cfg.seed = Some(seed);
        }
        if let Some(seed) = cfg.seed {
            cfg.suite.ensemble.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) {
        let s = &mut self.suite;
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if o.out.is_some() {
            self.out.clone_from(&o.out);
        }
        if o.csv.is_some() {
            self.csv.clone_from(&o.csv);
        }
        if let Some(v) = o.grid_step {
            s.grid_step = v;
        }
        if let Some(v) = o.window {
            s.window = v;
        }
        if o.j_max.is_some() {
            s.j_max = o.j_max;
        }
        if let Some(v) = &o.k_levels {
            s.k_levels.clone_from(v);
        }
        if let Some(v) = o.tolerance_scale {
            s.tolerance_scale = v;
        }
        if let Some(v) = o.count {
            s.ensemble.count = v;
        }
        if let Some(v) = o.mutation {
            s.mutation = v;
        }
        if let Some(v) = &o.only {
            s.only.clone_from(v);
        }
    }

    pub fn seed(&self) -> u64 {
        self.suite.seed()
    }

    fn validate(&self) -> Result<()> {
        let s = &self.suite;
        let bad = |what: &str| Err(Error::InvalidArgument(what.to_string()));
        if !(s.grid_step > 0.0 && s.grid_step.is_finite()) {
            return bad("grid_step must be positive");
        }
        if !(s.window[0] < s.window[1]) || !s.window.iter().all(|v| v.is_finite()) {
            return bad("window must be a finite interval [a, b] with a < b");
        }
        if !(s.tolerance_scale > 0.0) {
            return bad("tolerance_scale must be positive");
        }
        if s.k_levels.is_empty() || s.k_levels.iter().any(|&k| k == 0 || k > 3) {
            return bad("k levels must lie in 1..=3");
        }
        if s.families == 0 || s.family_size == 0 || s.family_terms == 0 || !(s.family_alpha > 0.0) {
            return bad("family settings must be positive");
        }
        if !(s.stability_tolerance > 0.0) {
            return bad("stability_tolerance must be positive");
        }
        Ok(())
    }
}
