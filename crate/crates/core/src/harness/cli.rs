use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::config::{Overrides, RunConfig, SEED_ENV};
use super::experiments::{amalgam_experiment, converge_experiment, GridSpec};
use crate::error::{Error, Result};
use crate::mollifier::Mollifier;
use crate::norms::{stepanov_norm, Interval, NormExponent};
use crate::operators::{DyadicLevel, FrequencyMultiplier, SignConvention, SignVariant};
use crate::poly::TrigPolynomial;
use crate::verify::{generate_ensemble, run_suite, Mutation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "steplab",
    version,
    about = "Stepanov-norm experiments on trigonometric polynomials"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Master seed (STEPLAB_SEED overrides it).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON file with RunConfig fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    grid_step: Option<f64>,
    /// Window as `a,b`.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    window: Option<Vec<f64>>,
    #[arg(long = "jmax", global = true)]
    j_max: Option<u32>,
    /// Dyadic exponents, comma separated.
    #[arg(long = "k", global = true, value_delimiter = ',')]
    k_levels: Option<Vec<u32>>,
    #[arg(long, global = true)]
    tolerance_scale: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the certification suite.
    Verify {
        #[arg(long, value_enum)]
        mutation: Option<MutationArg>,
        /// Ensemble size.
        #[arg(long)]
        count: Option<usize>,
        /// Check groups to run, comma separated.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
    },
    /// Stepanov norm of a polynomial JSON file.
    Norm {
        input: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Apply a frequency multiplier.
    Transform {
        input: PathBuf,
        #[arg(long, value_enum)]
        op: OpArg,
        /// Level `j` (or `k` for `psi`).
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        j: i32,
        /// Sampled CSV path; defaults to `--out` with a `.csv` extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Lacunary convergence curve as CSV.
    Converge {
        #[arg(long = "N", default_value_t = 20)]
        n: u32,
    },
    /// Amalgam divergence table as CSV.
    Amalgam {
        #[arg(long = "N", default_value_t = 1024)]
        n_max: i64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Emit the generated ensemble as a JSON array of polynomials.
    Ensemble {
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MutationArg {
    FlipMinusSign,
    ShrinkPlateau,
    IncludeSelfTerm,
}

impl From<MutationArg> for Mutation {
    fn from(m: MutationArg) -> Self {
        match m {
            MutationArg::FlipMinusSign => Mutation::FlipMinusSign,
            MutationArg::ShrinkPlateau => Mutation::ShrinkPlateau,
            MutationArg::IncludeSelfTerm => Mutation::IncludeSelfTerm,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OpArg {
    #[value(name = "H")]
    Hilbert,
    #[value(name = "H+")]
    HilbertPlus,
    #[value(name = "H-")]
    HilbertMinus,
    #[value(name = "Sj")]
    Sj,
    #[value(name = "Rj")]
    Rj,
    #[value(name = "psi")]
    Psi,
}

/// Parses `args` (program name first) and runs it. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    match execute(cli, env_seed.as_deref()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: Cli, env_seed: Option<&str>) -> Result<i32> {
    let c = &cli.common;
    let window = match c.window.as_deref() {
        None => None,
        Some([a, b]) => Some([*a, *b]),
        Some(_) => return Err(Error::InvalidArgument("--window takes a,b".into())),
    };
    let mut flags = Overrides {
        seed: c.seed,
        out: c.out.clone(),
        grid_step: c.grid_step,
        window,
        j_max: c.j_max,
        k_levels: c.k_levels.clone(),
        tolerance_scale: c.tolerance_scale,
        ..Default::default()
    };
    match &cli.command {
        Command::Verify {
            mutation,
            count,
            only,
        } => {
            flags.mutation = mutation.map(Into::into);
            flags.count = *count;
            flags.only.clone_from(only);
        }
        Command::Ensemble { count } => flags.count = *count,
        Command::Transform { csv, .. } => flags.csv.clone_from(csv),
        _ => {}
    }
    let cfg = RunConfig::resolve(c.config.as_deref(), &flags, env_seed)?;

    match cli.command {
        Command::Verify { .. } => {
            let report = run_suite(&cfg.suite)?;
            print!("{}", report.table());
            if let Some(path) = &cfg.out {
                write_file(path, &(report.to_json() + "\n"))?;
            }
            Ok(if report.pass {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Norm { input, p } => {
            let f = read_polynomial(&input)?;
            let [a, b] = cfg.suite.window;
            let est = stepanov_norm(
                &f,
                NormExponent::new(p)?,
                Interval::new(a, b)?,
                cfg.suite.grid_step,
            )?;
            emit(cfg.out.as_deref(), &to_json(&est)?)?;
            Ok(EXIT_OK)
        }
        Command::Transform { input, op, j, .. } => {
            let f = read_polynomial(&input)?;
            let level = || {
                u32::try_from(j)
                    .map(DyadicLevel)
                    .map_err(|_| Error::InvalidArgument(format!("level must be >= 0, got {j}")))
            };
            let m = match op {
                OpArg::Hilbert => FrequencyMultiplier::hilbert(),
                OpArg::HilbertPlus => {
                    FrequencyMultiplier::hilbert_pm(SignVariant::Plus, SignConvention::default())
                }
                OpArg::HilbertMinus => {
                    FrequencyMultiplier::hilbert_pm(SignVariant::Minus, SignConvention::default())
                }
                OpArg::Sj => FrequencyMultiplier::dyadic(level()?),
                OpArg::Rj => FrequencyMultiplier::smoothed(level()?, Mollifier::new()),
                OpArg::Psi => FrequencyMultiplier::lp_piece(j, Mollifier::new()),
            };
            let g = m.apply(&f);
            emit(cfg.out.as_deref(), &to_json(&g)?)?;
            let csv_path = cfg
                .csv
                .clone()
                .or_else(|| cfg.out.as_ref().map(|p| p.with_extension("csv")));
            if let Some(path) = csv_path {
                write_file(
                    &path,
                    &sample_csv(&g, cfg.suite.window, cfg.suite.grid_step),
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Converge { n } => {
            let grid = match (window, flags.grid_step) {
                (None, None) => GridSpec::default(),
                (w, h) => {
                    let [a, b] = w.unwrap_or([0.0, 10.0]);
                    let h = h.unwrap_or((b - a) / 10_000.0);
                    GridSpec {
                        start: a,
                        end: b,
                        points: ((b - a) / h).round() as usize + 1,
                    }
                }
            };
            let j_max = cfg.suite.j_max.unwrap_or(32);
            let curve = converge_experiment(n, 0..=j_max, grid)?;
            emit(cfg.out.as_deref(), &curve.to_csv())?;
            let bounded = curve
                .rows
                .iter()
                .all(|r| r.sup_error <= r.tail_oracle + 1e-8 * cfg.suite.tolerance_scale);
            Ok(if curve.is_nonincreasing() && bounded {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Amalgam { n_max, p } => {
            let table = amalgam_experiment(n_max, NormExponent::new(p)?)?;
            emit(cfg.out.as_deref(), &table.to_csv())?;
            Ok(EXIT_OK)
        }
        Command::Ensemble { .. } => {
            let members = generate_ensemble(&cfg.suite.ensemble)?;
            emit(cfg.out.as_deref(), &to_json(&members)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn read_polynomial(path: &Path) -> Result<TrigPolynomial<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("bad polynomial in {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

/// `x,re,im` on `window` at spacing `step`.
pub fn sample_csv(f: &TrigPolynomial<f64>, window: [f64; 2], step: f64) -> String {
    use std::fmt::Write as _;
    let n = ((window[1] - window[0]) / step).floor() as usize + 1;
    let mut out = String::from("x,re,im\n");
    for (i, v) in f.evaluate_grid(window[0], step, n).iter().enumerate() {
        let _ = writeln!(out, "{},{:e},{:e}", window[0] + i as f64 * step, v.re, v.im);
    }
    out
}
