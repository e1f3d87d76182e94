use std::f64::consts::{PI, TAU};

use num_complex::Complex;
use rand::{Rng, RngCore};
use rayon::prelude::*;

use super::ensemble::{complex_gaussian, member_rng, separated_points};
use super::{constants, generate_ensemble, CheckRecord, EnsembleSpec, Mutation, SuiteConfig};
use crate::error::Result;
use crate::harness::{amalgam_experiment, converge_experiment, GridSpec};
use crate::mollifier::Mollifier;
use crate::norms::{
    besicovitch_seminorm, exceedance_measure, sampled_window_integral, stepanov_norm,
    stepanov_norm_family, window_integral, window_integral_closed_form, window_integral_quadrature,
    ExceedanceThreshold, Interval, NormExponent, SampledFunction,
};
use crate::operators::{
    coefficient_distance, direct_convolution_oracle, dyadic_partial_sum, hilbert,
    hilbert_identity_check_with, hilbert_pm_with, littlewood_paley_pieces, maximal_partial_sum,
    maximal_partial_sum_grid, pv_hilbert_indicator, pv_hilbert_indicator_quadrature,
    required_square_level, sequence_hilbert_with, sj_via_modulation_with, smoothed_maximal_grid,
    square_function, square_function_grid, DyadicLevel, FrequencyMultiplier, KernelPiece, SelfTerm,
    SignConvention, SignVariant,
};
use crate::poly::{AveragingWindow, FrequencyList, TrigPolynomial};

type P = TrigPolynomial<f64>;

// Stream tags keep every check's randomness independent of the others.
const TAG_SEQUENCES: u64 = 1;
const TAG_WINDOWS: u64 = 2;
const TAG_CONVOLUTION: u64 = 3;
const TAG_DYADIC: u64 = 4;
const TAG_FAMILIES: u64 = 5;
const TAG_SINGLE: u64 = 6;
const TAG_MOLLIFIER: u64 = 7;
const TAG_ESTIMATOR: u64 = 8;
const TAG_CHEBYSHEV: u64 = 9;
const TAG_SIGNS: u64 = 10;
const TAG_RATIO_SEEDS: u64 = 11;
const TAG_PV: u64 = 12;

/// Slack for bounds that are attained exactly by single-term members.
const ROUNDING: f64 = 1e-12;

const VARIANTS: [SignVariant; 2] = [SignVariant::Plus, SignVariant::Minus];

fn rng_for(seed: u64, tag: u64, index: u64) -> rand_chacha::ChaCha8Rng {
    member_rng(seed, (tag << 40) | index)
}

/// Maximum that propagates NaN.
fn worst<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, |a, b| {
        if a.is_nan() || b.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    })
}

fn collect<T: Send>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    members: Vec<P>,
    mollifier: Mollifier<f64>,
    signs: SignConvention,
    self_term: SelfTerm,
}

impl Ctx<'_> {
    fn seed(&self) -> u64 {
        self.cfg.seed()
    }

    fn tol(&self, base: f64) -> f64 {
        base * self.cfg.tolerance_scale
    }

    fn window(&self) -> Result<Interval<f64>> {
        Interval::new(self.cfg.window[0], self.cfg.window[1])
    }

    fn p(&self, v: f64) -> NormExponent<f64> {
        NormExponent::new(v).expect("valid exponent")
    }
}

fn guard(name: &str, r: Result<CheckRecord>) -> CheckRecord {
    r.unwrap_or_else(|e| CheckRecord::failed(name, e))
}

pub(super) fn all(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mollifier = match cfg.mutation {
        Mutation::ShrinkPlateau => Mollifier::with_plateau(0.4),
        _ => Mollifier::new(),
    };
    let signs = match cfg.mutation {
        Mutation::FlipMinusSign => SignConvention {
            plus_at_zero: 1,
            minus_at_zero: 1,
        },
        _ => SignConvention::default(),
    };
    let self_term = match cfg.mutation {
        Mutation::IncludeSelfTerm => SelfTerm::Include,
        _ => SelfTerm::Exclude,
    };
    let members = match generate_ensemble(&cfg.ensemble) {
        Ok(m) => m,
        Err(e) => return vec![CheckRecord::failed("ensemble_generation", e)],
    };
    let ctx = Ctx {
        cfg,
        members,
        mollifier,
        signs,
        self_term,
    };
    GROUPS
        .iter()
        .filter(|(name, _)| cfg.only.is_empty() || cfg.only.iter().any(|o| o == name))
        .flat_map(|(_, run)| run(&ctx))
        .collect()
}

type Group = (&'static str, fn(&Ctx) -> Vec<CheckRecord>);

macro_rules! single {
    ($name:literal, $f:ident) => {
        ($name, |c: &Ctx| vec![guard($name, $f(c))])
    };
}

/// Check groups in run order. Most groups emit one record under their own
/// name.
const GROUPS: &[Group] = &[
    single!("hilbert_square_identity", hilbert_square_identity),
    single!("separated_hilbert_inequality", separated_hilbert_inequality),
    single!("separated_hilbert_unit_lattice", unit_lattice),
    single!("window_energy_bound", window_energy_bound),
    single!("parseval_chain", parseval_chain),
    single!("parseval_single_term_equality", parseval_single_term),
    single!("convolution_multiplier_agreement", convolution_agreement),
    single!("dyadic_modulation_decomposition", dyadic_modulation),
    single!("maximal_pointwise_split", maximal_split),
    single!("maximal_bruteforce_agreement", maximal_bruteforce),
    single!("square_function_tail_stability", square_tail),
    single!("pv_indicator_agreement", pv_agreement),
    single!("mollifier_cutoff_identity", cutoff_identity),
    single!("mollifier_telescoping", telescoping),
    single!("mollifier_range_and_symmetry", mollifier_range),
    single!("hilbert_pm_average", hilbert_average),
    single!("sign_identity", sign_identity),
    single!("multiplier_composition", composition),
    single!("norm_nesting", nesting),
    single!("window_closed_vs_quadrature", closed_vs_quadrature),
    single!("chebyshev_consistency", chebyshev),
    single!("coefficient_estimator_certificate", estimator),
    single!("modulation_separation", modulation_separation),
    single!("constants_monotone", constants_monotone),
    ("vector_hilbert_chain", vector_hilbert),
    ("ratio_reports", ratio_reports),
    ("lacunary", lacunary),
    ("amalgam", amalgam),
];

pub(super) fn group_names() -> impl Iterator<Item = &'static str> {
    GROUPS.iter().map(|(n, _)| *n)
}

fn hilbert_square_identity(ctx: &Ctx) -> Result<CheckRecord> {
    let rel = collect(
        ctx.members
            .par_iter()
            .map(|f| {
                let scale = f.coefficient_l1().powi(2).max(f64::MIN_POSITIVE);
                let mut w = 0.0f64;
                for v in VARIANTS {
                    w = worst([w, hilbert_identity_check_with(f, v, ctx.signs)? / scale]);
                }
                Ok(w)
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("hilbert_square_identity", worst(rel), ctx.tol(1e-10))
            .with("members", ctx.members.len())
            .with("kind", "identity"),
    )
}

fn separated_hilbert_inequality(ctx: &Ctx) -> Result<CheckRecord> {
    let n = ctx.cfg.sequences;
    let max_len = ctx.cfg.sequence_len.max(1);
    let ratios = collect(
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(ctx.seed(), TAG_SEQUENCES, i as u64);
                let len = rng.random_range(1..=max_len);
                let alpha = (rng.random::<f64>() * (100f64).ln()).exp() * 0.1;
                let span = len as f64 * alpha * 3.0;
                let freqs = separated_points(&mut rng, len, 0.0, span, alpha);
                let a: Vec<Complex<f64>> =
                    (0..len).map(|_| complex_gaussian(&mut rng, 1.0)).collect();
                let t = sequence_hilbert_with(&FrequencyList::new(freqs)?, &a, ctx.self_term)?;
                let norm = |v: &[Complex<f64>]| v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                Ok(norm(&t) / norm(&a) / (PI / alpha))
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("separated_hilbert_inequality", worst(ratios), 1.0)
            .with("cases", n)
            .with("max_len", max_len)
            .with("kind", "explicit_bound"),
    )
}

fn unit_lattice(ctx: &Ctx) -> Result<CheckRecord> {
    let n: i64 = 10_000;
    let freqs: Vec<f64> = (-n..=n).map(|j| j as f64).collect();
    let mut a = vec![Complex::new(0.0, 0.0); freqs.len()];
    a[n as usize] = Complex::new(1.0, 0.0);
    let t = sequence_hilbert_with(&FrequencyList::new(freqs)?, &a, ctx.self_term)?;
    let partial: f64 = t.iter().map(|c| c.norm_sqr()).sum();
    // Σ_{|j|>N} 1/j² by Euler-Maclaurin.
    let nf = n as f64;
    let tail = 2.0 * (1.0 / nf - 1.0 / (2.0 * nf * nf) + 1.0 / (6.0 * nf.powi(3)));
    let value = (partial + tail).sqrt();
    let target = (PI * PI / 3.0).sqrt();
    Ok(CheckRecord::at_most(
        "separated_hilbert_unit_lattice",
        (value - target).abs(),
        1e-3,
    )
    .with("norm", value)
    .with("target", target)
    .with("kind", "explicit_value"))
}

fn energy_factor(f: &P) -> f64 {
    f.separation().energy_factor()
}

fn window_energy_bound(ctx: &Ctx) -> Result<CheckRecord> {
    let two = ctx.p(2.0);
    let [a, b] = ctx.cfg.window;
    let ratios = collect(
        ctx.members
            .par_iter()
            .enumerate()
            .map(|(i, f)| {
                let mut rng = rng_for(ctx.seed(), TAG_WINDOWS, i as u64);
                let bound = energy_factor(f) * f.coefficient_l2_sq();
                let radius = 64.0 * f64::EPSILON * f.coefficient_l1().powi(2);
                let mut w = 0.0f64;
                for _ in 0..64 {
                    let x = a + (b - a) * rng.random::<f64>();
                    let v = window_integral(f, two, x)?;
                    w = worst([w, v / (bound + radius)]);
                }
                Ok(w)
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("window_energy_bound", worst(ratios), 1.0)
            .with("members", ctx.members.len())
            .with("windows_per_member", 64)
            .with("kind", "explicit_bound"),
    )
}

fn parseval_chain(ctx: &Ctx) -> Result<CheckRecord> {
    let two = ctx.p(2.0);
    let window = ctx.window()?;
    let ratios = collect(
        ctx.members
            .par_iter()
            .map(|f| {
                let est = stepanov_norm(f, two, window, ctx.cfg.grid_step)?;
                let lower_bound = besicovitch_seminorm(f) / est.upper();
                let energy = est.lower().powi(2) / (energy_factor(f) * f.coefficient_l2_sq());
                Ok(worst([lower_bound, energy]))
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("parseval_chain", worst(ratios), 1.0 + ROUNDING)
            .with("members", ctx.members.len())
            .with("kind", "explicit_bound"),
    )
}

fn parseval_single_term(ctx: &Ctx) -> Result<CheckRecord> {
    let two = ctx.p(2.0);
    let window = ctx.window()?;
    let diffs = collect(
        (0..50u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(ctx.seed(), TAG_SINGLE, i);
                let f = P::single(
                    rng.random_range(-40.0..40.0),
                    complex_gaussian(&mut rng, 1.0),
                );
                let est = stepanov_norm(&f, two, window, ctx.cfg.grid_step)?;
                Ok((besicovitch_seminorm(&f) - est.value).abs() / f.coefficient_l1())
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("parseval_single_term_equality", worst(diffs), ctx.tol(1e-9))
            .with("cases", 50)
            .with("kind", "identity"),
    )
}

fn convolution_agreement(ctx: &Ctx) -> Result<CheckRecord> {
    let m = ctx.mollifier;
    let n = ctx.cfg.convolution_cases;
    let errs = collect(
        (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(ctx.seed(), TAG_CONVOLUTION, i);
                let k = (i % 6) as i32;
                let which = if i % 2 == 0 {
                    KernelPiece::Phi
                } else {
                    KernelPiece::Psi
                };
                let reach = 2.5 * 2f64.powi(k);
                let f = P::from_terms(
                    (0..5)
                        .map(|_| {
                            (
                                rng.random_range(-reach..reach),
                                complex_gaussian(&mut rng, 1.0),
                            )
                        })
                        .collect::<Vec<_>>(),
                );
                let x = rng.random_range(-5.0..5.0);
                let mult = match which {
                    KernelPiece::Phi => FrequencyMultiplier::smoothed(DyadicLevel(k as u32), m),
                    KernelPiece::Psi => FrequencyMultiplier::lp_piece(k, m),
                };
                let exact = mult.apply(&f).evaluate(x);
                let oracle = direct_convolution_oracle(&f, &m, which, k, x, 200.0 * 2f64.powi(-k))?;
                Ok((oracle - exact).norm() / f.coefficient_l1())
            })
            .collect(),
    )?;
    Ok(CheckRecord::at_most(
        "convolution_multiplier_agreement",
        worst(errs),
        ctx.tol(1e-6),
    )
    .with("cases", n)
    .with("kind", "identity"))
}

fn dyadic_modulation(ctx: &Ctx) -> Result<CheckRecord> {
    let spec = EnsembleSpec {
        real_valued: false,
        seed: ctx.seed() ^ (TAG_DYADIC << 48),
        ..ctx.cfg.ensemble.clone()
    };
    let members = generate_ensemble(&spec)?;
    let dists: Vec<f64> = members
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let mut rng = rng_for(ctx.seed(), TAG_DYADIC, i as u64);
            let planted = rng.random_range(0..=5u32);
            let c = 2f64.powi(planted as i32);
            let f = f.add(&P::from_terms([
                (c, complex_gaussian(&mut rng, 1.0)),
                (-c, complex_gaussian(&mut rng, 1.0)),
            ]));
            let scale = f.coefficient_l1();
            worst((0..=6).map(|j| {
                let j = DyadicLevel(j);
                coefficient_distance(
                    &dyadic_partial_sum(&f, j),
                    &sj_via_modulation_with(&f, j, ctx.signs),
                ) / scale
            }))
        })
        .collect();
    Ok(CheckRecord::at_most(
        "dyadic_modulation_decomposition",
        worst(dists),
        ctx.tol(1e-12),
    )
    .with("members", members.len())
    .with("levels", "0..=6")
    .with("kind", "identity"))
}

fn vector_hilbert(ctx: &Ctx) -> Vec<CheckRecord> {
    let names: Vec<String> = ctx
        .cfg
        .k_levels
        .iter()
        .map(|k| format!("vector_hilbert_chain_k{k}"))
        .collect();
    let run = || -> Result<Vec<CheckRecord>> {
        let window = ctx.window()?;
        let k_max = ctx.cfg.k_levels.iter().copied().max().unwrap_or(1);
        let consts = constants(ctx.cfg.family_alpha, k_max)?;
        let families: Vec<Vec<P>> = collect(
            (0..ctx.cfg.families as u64)
                .map(|i| {
                    let mut rng = rng_for(ctx.seed(), TAG_FAMILIES, i);
                    let span = ctx.cfg.family_terms as f64 * ctx.cfg.family_alpha;
                    generate_ensemble(&EnsembleSpec {
                        seed: rng.next_u64(),
                        count: rng.random_range(1..=ctx.cfg.family_size),
                        terms_min: 1,
                        terms_max: ctx.cfg.family_terms,
                        alpha: ctx.cfg.family_alpha,
                        freq_span: [-span, span],
                        coeff_scale: 1.0,
                        real_valued: true,
                    })
                })
                .collect(),
        )?;
        let mut out = Vec::new();
        for &k in &ctx.cfg.k_levels {
            let p = ctx.p(2f64.powi(k as i32));
            let ratios = collect(
                families
                    .par_iter()
                    .map(|fam| {
                        let den = stepanov_norm_family(fam, p, window, ctx.cfg.grid_step)?;
                        let mut w = 0.0f64;
                        for v in VARIANTS {
                            let hs: Vec<P> = fam
                                .iter()
                                .map(|f| hilbert_pm_with(f, v, ctx.signs))
                                .collect();
                            let num = stepanov_norm_family(&hs, p, window, ctx.cfg.grid_step)?;
                            w = worst([w, num.lower() / den.upper()]);
                        }
                        Ok(w)
                    })
                    .collect(),
            )?;
            out.push(
                CheckRecord::at_most(
                    &format!("vector_hilbert_chain_k{k}"),
                    worst(ratios),
                    consts.b(k),
                )
                .with("families", families.len())
                .with("alpha", ctx.cfg.family_alpha)
                .with("kind", "explicit_bound"),
            );
        }
        Ok(out)
    };
    match run() {
        Ok(v) => v,
        Err(e) => names.iter().map(|n| CheckRecord::failed(n, &e)).collect(),
    }
}

/// `sup_i ∫_{x_i}^{x_i+1} |v|^p` from grid samples at spacing `1/per_unit`
/// (trapezoid rule), raised to `1/p`.
pub fn grid_stepanov(values: &[f64], per_unit: usize, p: f64) -> f64 {
    if values.len() <= per_unit {
        return f64::NAN;
    }
    let h = 1.0 / per_unit as f64;
    let pw: Vec<f64> = values.iter().map(|v| v.abs().powf(p)).collect();
    let mut sum: f64 = pw[..=per_unit].iter().sum();
    let mut best = f64::NEG_INFINITY;
    for i in 0..pw.len() - per_unit {
        if i > 0 {
            sum += pw[i + per_unit] - pw[i - 1];
        }
        let w = h * (sum - 0.5 * (pw[i] + pw[i + per_unit]));
        best = best.max(w);
    }
    best.max(0.0).powf(1.0 / p)
}

const RATIO_PER_UNIT: usize = 64;

struct RatioSample {
    square: Vec<f64>,
    maximal: Vec<f64>,
}

fn ratio_sample(f: &P, ctx: &Ctx, exps: &[f64]) -> Result<RatioSample> {
    let [a, b] = ctx.cfg.window;
    let n = ((b - a + 1.0) * RATIO_PER_UNIT as f64).ceil() as usize + 1;
    let h = 1.0 / RATIO_PER_UNIT as f64;
    let j_max = ctx.cfg.j_max.unwrap_or_else(|| required_square_level(f));
    let base: Vec<f64> = f.evaluate_grid(a, h, n).iter().map(|c| c.norm()).collect();
    let lp = {
        let mut acc = vec![0.0; n];
        for (_, piece) in littlewood_paley_pieces(f, &ctx.mollifier) {
            for (s, v) in acc.iter_mut().zip(piece.evaluate_grid(a, h, n)) {
                *s += v.norm_sqr();
            }
        }
        acc.into_iter().map(f64::sqrt).collect::<Vec<_>>()
    };
    let smax = maximal_partial_sum_grid(f, j_max, a, h, n)?;
    let mut square = Vec::new();
    let mut maximal = Vec::new();
    for &p in exps {
        let den = grid_stepanov(&base, RATIO_PER_UNIT, p);
        square.push(grid_stepanov(&lp, RATIO_PER_UNIT, p) / den);
        maximal.push(grid_stepanov(&smax, RATIO_PER_UNIT, p) / den);
    }
    Ok(RatioSample { square, maximal })
}

fn ratio_reports(ctx: &Ctx) -> Vec<CheckRecord> {
    let ks = ctx.cfg.k_levels.clone();
    let exps: Vec<f64> = ks.iter().map(|&k| 2f64.powi(k as i32)).collect();
    let mut names = Vec::new();
    for &k in &ks {
        names.push(format!("square_function_ratio_p{}", 1u32 << k));
        names.push(format!("maximal_ratio_k{k}"));
    }
    names.push("ratio_seed_stability".to_string());
    let run = || -> Result<Vec<CheckRecord>> {
        let seeds = ctx.cfg.stability_seeds.max(1);
        // Row s holds, per exponent, the max ratios of seed s.
        let mut sq_max = vec![vec![0.0f64; exps.len()]; seeds];
        let mut mx_max = vec![vec![0.0f64; exps.len()]; seeds];
        for s in 0..seeds {
            let members = if s == 0 {
                ctx.members.clone()
            } else {
                let mut rng = rng_for(ctx.seed(), TAG_RATIO_SEEDS, s as u64);
                generate_ensemble(&EnsembleSpec {
                    seed: rng.next_u64(),
                    ..ctx.cfg.ensemble.clone()
                })?
            };
            let samples = collect(
                members
                    .par_iter()
                    .map(|f| ratio_sample(f, ctx, &exps))
                    .collect(),
            )?;
            for smp in &samples {
                for e in 0..exps.len() {
                    sq_max[s][e] = worst([sq_max[s][e], smp.square[e]]);
                    mx_max[s][e] = worst([mx_max[s][e], smp.maximal[e]]);
                }
            }
        }
        let mut out = Vec::new();
        let mut spread = 0.0f64;
        for (e, &k) in ks.iter().enumerate() {
            let labels = [
                (format!("square_function_ratio_p{}", 1u32 << k), &sq_max),
                (format!("maximal_ratio_k{k}"), &mx_max),
            ];
            for (label, table) in labels {
                let per_seed: Vec<f64> = table.iter().map(|row| row[e]).collect();
                let mut sorted = per_seed.clone();
                sorted.sort_by(|a, b| a.total_cmp(b));
                let median = sorted[sorted.len() / 2];
                spread = worst([
                    spread,
                    worst(per_seed.iter().map(|v| (v - median).abs() / median)),
                ]);
                out.push(
                    CheckRecord::report(&label, per_seed[0])
                        .with("exponent", 2f64.powi(k as i32))
                        .with("per_seed_max", per_seed.clone())
                        .with("members", ctx.members.len())
                        .with("method", "grid")
                        .with("kind", "ratio_report"),
                );
            }
        }
        out.push(
            CheckRecord::at_most("ratio_seed_stability", spread, ctx.cfg.stability_tolerance)
                .with("seeds", seeds)
                .with("kind", "stability"),
        );
        Ok(out)
    };
    match run() {
        Ok(v) => v,
        Err(e) => names.iter().map(|n| CheckRecord::failed(n, &e)).collect(),
    }
}

fn maximal_split(ctx: &Ctx) -> Result<CheckRecord> {
    let [a, b] = ctx.cfg.window;
    let h = 1.0 / 32.0;
    let n = ((b - a) / h) as usize + 1;
    let excess = collect(
        ctx.members
            .par_iter()
            .map(|f| {
                let j_max = ctx.cfg.j_max.unwrap_or_else(|| required_square_level(f));
                let smax = maximal_partial_sum_grid(f, j_max, a, h, n)?;
                let sq = square_function_grid(f, j_max, a, h, n, &ctx.mollifier)?;
                let rm = smoothed_maximal_grid(f, j_max, a, h, n, &ctx.mollifier);
                let scale = f.coefficient_l1();
                Ok(worst(
                    (0..n).map(|i| ((smax[i] - sq[i] - rm[i]) / scale).max(0.0)),
                ))
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("maximal_pointwise_split", worst(excess), ctx.tol(1e-12))
            .with("members", ctx.members.len())
            .with("grid_points", n)
            .with("kind", "pointwise_bound"),
    )
}

fn maximal_bruteforce(ctx: &Ctx) -> Result<CheckRecord> {
    let diffs = collect(
        ctx.members
            .par_iter()
            .take(100)
            .map(|f| {
                let j_max = required_square_level(f);
                let mut w = 0.0f64;
                for i in 0..8 {
                    let x = -3.0 + 0.77 * i as f64;
                    let fast = maximal_partial_sum(f, j_max, x)?;
                    let brute = (0..=j_max)
                        .map(|j| dyadic_partial_sum(f, DyadicLevel(j)).evaluate(x).norm())
                        .fold(0.0, f64::max);
                    w = worst([w, (fast - brute).abs() / f.coefficient_l1()]);
                }
                Ok(w)
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("maximal_bruteforce_agreement", worst(diffs), ctx.tol(1e-12))
            .with("kind", "identity"),
    )
}

fn square_tail(ctx: &Ctx) -> Result<CheckRecord> {
    let mut stable = true;
    for f in ctx.members.iter().take(100) {
        let j = required_square_level(f);
        for x in [0.0, 1.3, -7.9] {
            let a = square_function(f, j, x, &ctx.mollifier)?;
            let b = square_function(f, j + 5, x, &ctx.mollifier)?;
            stable &= a == b;
        }
    }
    Ok(CheckRecord::at_most(
        "square_function_tail_stability",
        (!stable) as u8 as f64,
        0.0,
    )
    .with("kind", "invariant"))
}

fn pv_agreement(ctx: &Ctx) -> Result<CheckRecord> {
    let mut rng = rng_for(ctx.seed(), TAG_PV, 0);
    let mut diffs = Vec::new();
    let mut points = Vec::new();
    while points.len() < 20 {
        let x: f64 = rng.random_range(-3.0..4.0);
        if x.abs() < 1e-3 || (x - 1.0).abs() < 1e-3 {
            continue;
        }
        points.push(x);
    }
    for &x in &points {
        diffs.push((pv_hilbert_indicator(x)? - pv_hilbert_indicator_quadrature(x)?).abs());
    }
    Ok(
        CheckRecord::at_most("pv_indicator_agreement", worst(diffs), ctx.tol(1e-8))
            .with("points", points.len())
            .with("kind", "identity"),
    )
}

fn cutoff_identity(ctx: &Ctx) -> Result<CheckRecord> {
    let m = ctx.mollifier;
    let n = 10_000;
    let dev = worst((0..=n).map(|i| {
        let xi = -1.0 + 2.0 * i as f64 / n as f64;
        (1.0 - m.phi_hat(xi) - m.psi_hat(xi)).abs()
    }));
    Ok(
        CheckRecord::at_most("mollifier_cutoff_identity", dev, ctx.tol(1e-14))
            .with("plateau", m.plateau())
            .with("kind", "identity"),
    )
}

fn telescoping(ctx: &Ctx) -> Result<CheckRecord> {
    let m = ctx.mollifier;
    let mut rng = rng_for(ctx.seed(), TAG_MOLLIFIER, 0);
    let mut dev = 0.0f64;
    for _ in 0..2000 {
        let lam = rng.random_range(-3000.0..3000.0);
        let k = rng.random_range(1..=20);
        let sum: f64 = (0..k).map(|j| m.psi_hat_scaled(j, lam)).sum();
        let target = m.phi_hat_scaled(k, lam) - m.phi_hat(lam);
        dev = worst([dev, (sum - target).abs()]);
    }
    Ok(CheckRecord::at_most("mollifier_telescoping", dev, ctx.tol(1e-14)).with("kind", "identity"))
}

fn mollifier_range(ctx: &Ctx) -> Result<CheckRecord> {
    let m = ctx.mollifier;
    let mut ok = true;
    for i in 0..=40_000 {
        let xi = -4.0 + 8.0 * i as f64 / 40_000.0;
        let (a, b) = (m.phi_hat(xi), m.psi_hat(xi));
        ok &= (0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b);
        ok &= a == m.phi_hat(-xi);
    }
    Ok(
        CheckRecord::at_most("mollifier_range_and_symmetry", (!ok) as u8 as f64, 0.0)
            .with("kind", "invariant"),
    )
}

fn hilbert_average(ctx: &Ctx) -> Result<CheckRecord> {
    let dev = worst(ctx.members.iter().map(|f| {
        // Every member gets a constant term so that the origin is exercised.
        let f = f.add(&P::from_real_terms(&[(0.0, 1.0)]));
        let avg = hilbert_pm_with(&f, SignVariant::Plus, ctx.signs)
            .add(&hilbert_pm_with(&f, SignVariant::Minus, ctx.signs))
            .scale(Complex::new(0.5, 0.0));
        coefficient_distance(&avg, &hilbert(&f))
    }));
    Ok(CheckRecord::at_most("hilbert_pm_average", dev, 0.0).with("kind", "identity"))
}

fn sign_identity(ctx: &Ctx) -> Result<CheckRecord> {
    let s = ctx.signs;
    let mut rng = rng_for(ctx.seed(), TAG_SIGNS, 0);
    let mut bad = 0usize;
    let mut cases = 0usize;
    for v in VARIANTS {
        let mut check = |a: f64, b: f64| {
            if a == 0.0 || b == 0.0 || a + b == 0.0 {
                return;
            }
            cases += 1;
            let lhs = 1.0 - (s.sgn(v, a) + s.sgn(v, b)) * s.sgn(v, a + b);
            if lhs != -s.sgn(v, a) * s.sgn(v, b) {
                bad += 1;
            }
        };
        // Every sign pattern of (a, b, a + b).
        for (a, b) in [
            (1.0, 2.0),
            (2.0, -1.0),
            (1.0, -2.0),
            (-1.0, 2.0),
            (-2.0, 1.0),
            (-1.0, -2.0),
        ] {
            check(a, b);
        }
        for _ in 0..10_000 {
            check(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
        }
    }
    Ok(CheckRecord::at_most("sign_identity", bad as f64, 0.0)
        .with("cases", cases)
        .with("kind", "identity"))
}

fn composition(ctx: &Ctx) -> Result<CheckRecord> {
    let m = ctx.mollifier;
    let ops = [
        FrequencyMultiplier::hilbert(),
        FrequencyMultiplier::dyadic(DyadicLevel(3)),
        FrequencyMultiplier::smoothed(DyadicLevel(4), m),
        FrequencyMultiplier::lp_piece(2, m),
    ];
    let mut dev = 0.0f64;
    for f in ctx.members.iter().take(100) {
        for a in &ops {
            for b in &ops {
                let seq = b.apply(&a.apply(f));
                let fused = a.compose(b).apply(f);
                dev = worst([dev, coefficient_distance(&seq, &fused) / f.coefficient_l1()]);
            }
        }
    }
    Ok(
        CheckRecord::at_most("multiplier_composition", dev, ctx.tol(1e-14))
            .with(
                "operators",
                ops.iter().map(|o| o.tag().to_string()).collect::<Vec<_>>(),
            )
            .with("kind", "identity"),
    )
}

fn nesting(ctx: &Ctx) -> Result<CheckRecord> {
    let window = Interval::new(ctx.cfg.window[0], ctx.cfg.window[0] + 16.0)?;
    let excess = collect(
        ctx.members
            .par_iter()
            .take(24)
            .map(|f| {
                let ests = [1.0, 2.0, 4.0]
                    .iter()
                    .map(|&p| stepanov_norm(f, ctx.p(p), window, ctx.cfg.grid_step))
                    .collect::<Result<Vec<_>>>()?;
                let mut w = 0.0f64;
                for i in 0..3 {
                    for j in i + 1..3 {
                        let gap = ests[i].lower() - ests[j].upper();
                        w = worst([w, gap.max(0.0)]);
                    }
                }
                Ok(w)
            })
            .collect(),
    )?;
    Ok(CheckRecord::at_most("norm_nesting", worst(excess), 0.0)
        .with("members", 24)
        .with("kind", "inequality"))
}

fn closed_vs_quadrature(ctx: &Ctx) -> Result<CheckRecord> {
    let rel = collect(
        ctx.members
            .par_iter()
            .take(50)
            .enumerate()
            .map(|(i, f)| {
                let mut w = 0.0f64;
                for p in [2.0, 4.0] {
                    let x = -10.0 + 3.7 * i as f64 % 20.0;
                    let a = window_integral_closed_form(f, ctx.p(p), x)?;
                    let b = window_integral_quadrature(f, ctx.p(p), x)?.value;
                    w = worst([w, (a - b).abs() / a.abs().max(f64::MIN_POSITIVE)]);
                }
                Ok(w)
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("window_closed_vs_quadrature", worst(rel), ctx.tol(1e-9))
            .with("kind", "identity"),
    )
}

fn chebyshev(ctx: &Ctx) -> Result<CheckRecord> {
    let q = ctx.p(2.0);
    let excess = collect(
        ctx.members
            .par_iter()
            .take(100)
            .enumerate()
            .map(|(i, f)| {
                let mut rng = rng_for(ctx.seed(), TAG_CHEBYSHEV, i as u64);
                let poly = f.clone();
                let g = SampledFunction::new(move |s: f64| poly.evaluate(s).norm())
                    .with_bandwidth(f.max_abs_freq())
                    .with_sup_bound(f.coefficient_l1());
                let mut w = 0.0f64;
                for _ in 0..4 {
                    let x = rng.random_range(-20.0..20.0);
                    let lq = sampled_window_integral(&g, q, x)?.value;
                    let lam = lq.sqrt() * rng.random_range(0.3..1.5);
                    if lam <= 0.0 {
                        continue;
                    }
                    let e = exceedance_measure(&g, ExceedanceThreshold::new(lam)?, x, 1e-3)?;
                    let bound = lq / (lam * lam) + e.resolution;
                    w = worst([w, (e.measure - bound).max(0.0)]);
                }
                Ok(w)
            })
            .collect(),
    )?;
    Ok(
        CheckRecord::at_most("chebyshev_consistency", worst(excess), 0.0)
            .with("kind", "inequality"),
    )
}

fn estimator(ctx: &Ctx) -> Result<CheckRecord> {
    let mut rng = rng_for(ctx.seed(), TAG_ESTIMATOR, 0);
    let mut excess = 0.0f64;
    for f in &ctx.members {
        for _ in 0..4 {
            let lam = if !f.is_empty() && rng.random::<bool>() {
                f.terms()[rng.random_range(0..f.len())].freq
            } else {
                rng.random_range(-45.0..45.0)
            };
            let t = AveragingWindow::new(rng.random_range(1.0..1000.0))?;
            let est = f.fourier_coefficient_estimate(lam, t);
            let exact = f.fourier_coefficient_exact(lam)?;
            let slack = 16.0 * f64::EPSILON * f.coefficient_l1();
            excess = worst([
                excess,
                ((est.value - exact).norm() - est.error_bound - slack).max(0.0),
            ]);
        }
    }
    Ok(
        CheckRecord::at_most("coefficient_estimator_certificate", excess, 0.0)
            .with("kind", "inequality"),
    )
}

fn modulation_separation(ctx: &Ctx) -> Result<CheckRecord> {
    let mut dev = 0.0f64;
    for f in ctx.members.iter().filter(|f| f.len() >= 2) {
        for mu in [1.0, -3.25, 16.0, 1e3 / 7.0] {
            let a = f.separation().alpha();
            let b = f.modulate(mu).separation().alpha();
            // Rounding of λ + μ moves each gap by at most one ulp per end.
            let ulp = 2.0 * f64::EPSILON * (f.max_abs_freq() + f64::abs(mu));
            dev = worst([dev, ((a - b).abs() / ulp)]);
        }
    }
    Ok(CheckRecord::at_most("modulation_separation", dev, 2.0).with("kind", "invariant"))
}

fn constants_monotone(_ctx: &Ctx) -> Result<CheckRecord> {
    let mut ok = true;
    let alphas = [0.1, 0.5, 1.0, TAU, 100.0];
    for w in alphas.windows(2) {
        let (lo, hi) = (constants(w[0], 4)?, constants(w[1], 4)?);
        for k in 1..=4 {
            ok &= lo.b(k) > hi.b(k);
            if k < 4 {
                ok &= lo.b(k + 1) > lo.b(k);
            }
        }
    }
    Ok(
        CheckRecord::at_most("constants_monotone", (!ok) as u8 as f64, 0.0)
            .with("kind", "invariant"),
    )
}

fn lacunary(ctx: &Ctx) -> Vec<CheckRecord> {
    let names = [
        "lacunary_convergence",
        "lacunary_monotone",
        "lacunary_full_retention",
    ];
    let n = ctx.cfg.converge_n;
    match converge_experiment(n, 0..=32, GridSpec::default()) {
        Ok(curve) => {
            let gap = worst(
                curve
                    .rows
                    .iter()
                    .map(|r| (r.sup_error - r.tail_oracle).abs()),
            );
            let full = 3f64.powi(n as i32);
            let retained = worst(
                curve
                    .rows
                    .iter()
                    .filter(|r| 2f64.powi(r.j as i32) >= full)
                    .map(|r| r.sup_error),
            );
            vec![
                CheckRecord::at_most(names[0], gap, ctx.tol(1e-8))
                    .with("n", n)
                    .with("grid_step", curve.grid.step())
                    .with("kind", "identity"),
                CheckRecord::at_most(names[1], (!curve.is_nonincreasing()) as u8 as f64, 0.0)
                    .with("kind", "invariant"),
                CheckRecord::at_most(names[2], retained, ctx.tol(1e-12)).with("kind", "identity"),
            ]
        }
        Err(e) => names.iter().map(|n| CheckRecord::failed(n, &e)).collect(),
    }
}

fn amalgam(ctx: &Ctx) -> Vec<CheckRecord> {
    let target = 2.0 / PI;
    let two = NormExponent::new(2.0).expect("valid exponent");
    let divergence = amalgam_experiment(ctx.cfg.amalgam_n_max, two).map(|t| {
        CheckRecord::at_most(
            "amalgam_divergence",
            (t.slope - target).abs() / target,
            0.15,
        )
        .require("strictly_increasing", t.is_strictly_increasing())
        .with("slope", t.slope)
        .with("target", target)
        .with("n_max", ctx.cfg.amalgam_n_max)
        .with("kind", "asymptotic")
    });
    let control = crate::norms::amalgam_l1_norm(
        &SampledFunction::indicator(0.0, 1.0),
        two,
        crate::norms::IndexRange::symmetric(ctx.cfg.amalgam_n_max),
    )
    .map(|v| {
        CheckRecord::at_most("amalgam_indicator_control", (v - 1.0).abs(), ctx.tol(1e-10))
            .with("value", v)
            .with("kind", "identity")
    });
    vec![
        guard("amalgam_divergence", divergence),
        guard("amalgam_indicator_control", control),
    ]
}
