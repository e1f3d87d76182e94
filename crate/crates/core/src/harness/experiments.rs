//! Lacunary convergence and amalgam divergence experiments.

use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::norms::{amalgam_window_norms, IndexRange, NormExponent};
use crate::operators::{dyadic_partial_sum, hilbert_indicator_function, DyadicLevel};
use crate::poly::TrigPolynomial;

/// Uniform sampling grid `start + i·(end − start)/(points − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn step(&self) -> f64 {
        (self.end - self.start) / (self.points.max(2) - 1) as f64
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            start: 0.0,
            end: 10.0,
            points: 10_001,
        }
    }
}

/// `f_N(x) = Σ_{n=1}^{N} 2^{−n} e^{i 3^n x}`.
pub fn lacunary_series(n: u32) -> Result<TrigPolynomial<f64>> {
    if n > 30 {
        return Err(Error::InvalidArgument(format!(
            "lacunary truncation must have N <= 30, got {n}"
        )));
    }
    Ok(TrigPolynomial::from_terms((1..=n).map(|k| {
        (
            3f64.powi(k as i32),
            Complex::new(0.5f64.powi(k as i32), 0.0),
        )
    })))
}

/// `Σ_{n <= N, 3^n > 2^j} 2^{−n}`.
pub fn lacunary_tail(n: u32, j: u32) -> f64 {
    let cut = 2f64.powi(j as i32);
    (1..=n)
        .filter(|&k| 3f64.powi(k as i32) > cut)
        .map(|k| 0.5f64.powi(k as i32))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub j: u32,
    pub sup_error: f64,
    pub tail_oracle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCurve {
    pub rows: Vec<ConvergenceRow>,
    pub grid: GridSpec,
}

impl ConvergenceCurve {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,sup_error,tail_oracle\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{:e},{:e}", r.j, r.sup_error, r.tail_oracle);
        }
        out
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].sup_error <= w[0].sup_error)
    }
}

/// Grid sup of `|S_j f_N − f_N|` next to the exact tail, for each `j`.
pub fn converge_experiment(
    n: u32,
    j_range: std::ops::RangeInclusive<u32>,
    grid: GridSpec,
) -> Result<ConvergenceCurve> {
    let f = lacunary_series(n)?;
    let step = grid.step();
    let full = f.evaluate_grid(grid.start, step, grid.points);
    let rows = j_range
        .map(|j| {
            let sj = dyadic_partial_sum(&f, DyadicLevel(j));
            let sup_error = sj
                .evaluate_grid(grid.start, step, grid.points)
                .iter()
                .zip(&full)
                .map(|(a, b)| (*a - *b).norm())
                .fold(0.0, f64::max);
            ConvergenceRow {
                j,
                sup_error,
                tail_oracle: lacunary_tail(n, j),
            }
        })
        .collect();
    Ok(ConvergenceCurve { rows, grid })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmalgamRow {
    pub n: i64,
    pub partial_sum: f64,
    pub log_n: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmalgamTable {
    pub rows: Vec<AmalgamRow>,
    /// Least-squares slope of `partial_sum` against `ln N` over the upper
    /// half of the schedule.
    pub slope: f64,
}

impl AmalgamTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,partial_sum,log_N\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{:.12},{:.12}", r.n, r.partial_sum, r.log_n);
        }
        out
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].partial_sum > w[0].partial_sum)
    }
}

/// `16, 32, ...` doubling up to `n_max`, ending at `n_max`.
pub fn doubling_schedule(n_max: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut n = 16;
    while n < n_max {
        out.push(n);
        n *= 2;
    }
    out.push(n_max);
    out
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Partial sums over `[−N, N]` of the per-window `L^{p'}` norms of
/// `H(χ_{[0,1]})`.
pub fn amalgam_experiment(n_max: i64, p_conj: NormExponent<f64>) -> Result<AmalgamTable> {
    if n_max < 16 {
        return Err(Error::InvalidArgument(format!(
            "amalgam schedule needs N_max >= 16, got {n_max}"
        )));
    }
    let g = hilbert_indicator_function::<f64>();
    let norms = amalgam_window_norms(&g, p_conj, IndexRange::symmetric(n_max))?;
    let at = |k: i64| norms[(k + n_max) as usize].1;
    let mut rows = Vec::new();
    let mut sum = at(0);
    let mut reached = 0;
    for n in doubling_schedule(n_max) {
        for k in reached + 1..=n {
            sum += at(k) + at(-k);
        }
        reached = n;
        rows.push(AmalgamRow {
            n,
            partial_sum: sum,
            log_n: (n as f64).ln(),
        });
    }
    let upper = &rows[rows.len() / 2..];
    let xs: Vec<f64> = upper.iter().map(|r| r.log_n).collect();
    let ys: Vec<f64> = upper.iter().map(|r| r.partial_sum).collect();
    Ok(AmalgamTable {
        slope: slope(&xs, &ys),
        rows,
    })
}
