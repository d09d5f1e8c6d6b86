//! Sweeps over `n`, the Taylor-expansion audit, affine-in-`1/n`
//! extrapolation and the Pommerenke upper-bound check.

use std::f64::consts::LN_2;
use std::io::{Read, Write};
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    push_construction, regular_ngon, single_diameter_move, ConstructionSpec,
};
use crate::error::{Error, Result};
use crate::flow::pair_statistics;
use crate::geometry::{diameter, log_discriminant, log_ratio, Configuration};
use crate::profile::Profile;
use crate::solvers::{binding_at, c_max, eps_max, DEFAULT_EPS_TOL};

/// Absolute slack added to the fourth-order envelope in the Taylor audit.
pub const AUDIT_SLACK: f64 = 1e-8;

/// Column order of the sweep CSV.
pub const CSV_HEADER: &str = "n,profile,c,log_ratio,max_rho,s2_over_n2,binding_angle,runtime_ms";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CMode {
    /// Solve for the largest feasible strength at this bisection width.
    Max {
        tol: f64,
    },
    Fixed(f64),
}

impl CMode {
    /// `max` or a number.
    pub fn parse(s: &str, tol: f64) -> Result<Self> {
        if s == "max" {
            return Ok(CMode::Max { tol });
        }
        s.parse::<f64>()
            .ok()
            .filter(|c| c.is_finite())
            .map(CMode::Fixed)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("--c expects `max` or a number, got {s:?}"))
            })
    }
}

/// The quantities of `log Δ(t) − n ln n = −½ Re S₂ t² + R₄` for one
/// configuration, with the envelope `|R₄| ≤ ¼ Σ|ρ|⁴/(1 − |ρ|t)⁴ · t⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorAudit {
    pub t: f64,
    /// `S₂` of the polygon the flow starts from.
    pub s2: Complex64,
    pub remainder_sum: f64,
    /// `|logRatio + ½ Re S₂ t²|`.
    pub deviation: f64,
    /// `¼ · remainder_sum · t⁴ + AUDIT_SLACK`.
    pub bound: f64,
    pub passed: bool,
}

/// Audit `log_ratio` of the push configuration at strength `c` against the
/// second-order expansion around the regular polygon. Meaningful when the
/// profile is antisymmetric (push and flow then coincide).
pub fn taylor_audit(n: usize, c: f64, profile: &Profile, log_ratio: f64) -> Result<TaylorAudit> {
    let t = c / n as f64;
    let stats = pair_statistics(&regular_ngon(n)?, profile, 2, Some(t))?;
    let s2 = stats.power_sums[1];
    let remainder_sum = stats.remainder.expect("time supplied");
    let deviation = (log_ratio + 0.5 * s2.re * t * t).abs();
    let bound = 0.25 * remainder_sum * t.powi(4) + AUDIT_SLACK;
    Ok(TaylorAudit {
        t,
        s2,
        remainder_sum,
        deviation,
        bound,
        passed: deviation <= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub profile: String,
    pub c: f64,
    pub log_ratio: f64,
    /// `max |ρ_ij|` on the constructed configuration.
    pub max_rho: f64,
    /// `Re S₂ / n²` at the flow origin.
    pub s2_over_n2: f64,
    pub binding_angle: f64,
    pub runtime_ms: u64,
    #[serde(skip)]
    pub audit: Option<TaylorAudit>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    /// Record wall-clock time per row. Off gives byte-reproducible output.
    pub timing: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { timing: true }
    }
}

pub fn sweep_record(
    n: usize,
    profile: &Profile,
    mode: CMode,
    options: SweepOptions,
) -> Result<SweepRecord> {
    let start = Instant::now();
    let (c, binding_angle) = match mode {
        CMode::Max { tol } => {
            let r = c_max(n, profile, tol)?;
            (r.c_max, r.binding_angle)
        }
        CMode::Fixed(c) => (c, binding_at(n, c, profile)?.3),
    };
    let config = push_construction(&ConstructionSpec::new(n, c, profile.clone())?)?;
    let lr = log_ratio(&config)?;
    let max_rho = pair_statistics(&config, profile, 1, None)?.max_abs;
    let audit = match taylor_audit(n, c, profile, lr) {
        Ok(a) => Some(a),
        Err(Error::ExpansionDiverges { .. }) => None,
        Err(e) => return Err(e),
    };
    let s2 = match &audit {
        Some(a) => a.s2.re,
        None => pair_statistics(&regular_ngon(n)?, profile, 2, None)?.power_sums[1].re,
    };
    let runtime_ms = if options.timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    };
    Ok(SweepRecord {
        n,
        profile: profile.kind().to_string(),
        c,
        log_ratio: lr,
        max_rho,
        s2_over_n2: s2 / (n * n) as f64,
        binding_angle,
        runtime_ms,
        audit,
    })
}

/// One record per `n`, in input order. A failure aborts the sweep and hands
/// back the records completed so far.
pub fn run_sweep(
    n_list: &[usize],
    profile: &Profile,
    mode: CMode,
    options: SweepOptions,
) -> Result<Vec<SweepRecord>> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("empty n list".into()));
    }
    if let Some(&n) = n_list.iter().find(|&&n| n < 4 || n % 2 != 0) {
        return Err(Error::NotEvenN(n));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "n list must be strictly ascending".into(),
        ));
    }
    let mut records = Vec::with_capacity(n_list.len());
    for &n in n_list {
        match sweep_record(n, profile, mode, options) {
            Ok(r) => records.push(r),
            Err(source) => {
                return Err(Error::SweepAborted {
                    n,
                    partial: records,
                    source: Box::new(source),
                })
            }
        }
    }
    Ok(records)
}

pub fn write_sweep_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads sweep CSV; `#` lines (such as the partial-output marker) are skipped.
pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let mut out = Vec::new();
    for rec in rd.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtrapolationResult {
    /// Fitted value at `n → ∞`.
    pub intercept: f64,
    /// Coefficient of `1/n`.
    pub slope: f64,
    /// Root of the sum of squared residuals.
    pub residual: f64,
}

/// Least-squares fit `y ≈ a + b/n` over `(n, y)` points.
pub fn fit_inverse_n(points: &[(f64, f64)]) -> Result<ExtrapolationResult> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "extrapolation needs at least 3 points, got {}",
            points.len()
        )));
    }
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    if ns.windows(2).any(|w| w[0] == w[1]) || ns.iter().any(|&n| n.is_nan() || n <= 0.0) {
        return Err(Error::InvalidArgument(
            "n values must be positive and distinct".into(),
        ));
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| 1.0 / p.0).collect();
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, p) in xs.iter().zip(points) {
        sxy += (x - x_mean) * (p.1 - y_mean);
        sxx += (x - x_mean) * (x - x_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let residual = xs
        .iter()
        .zip(points)
        .map(|(x, p)| (p.1 - intercept - slope * x).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ExtrapolationResult {
        intercept,
        slope,
        residual,
    })
}

/// Affine-in-`1/n` fit of `log_ratio` over the records.
pub fn extrapolate(records: &[SweepRecord]) -> Result<ExtrapolationResult> {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.log_ratio)).collect();
    fit_inverse_n(&pts)
}

/// `4(n − 1) ln 2`: the Pommerenke bound on `log Δ − n ln n` at diameter 2.
pub fn pommerenke_margin(n: usize) -> f64 {
    4.0 * (n as f64 - 1.0) * LN_2
}

pub fn pommerenke_check_record(record: &SweepRecord) -> bool {
    record.log_ratio <= pommerenke_margin(record.n)
}

/// `log Δ ≤ 4(n − 1) ln 2 + n ln n` for a configuration of diameter at most 2.
/// Coincident points give `Δ = 0`, which passes.
pub fn pommerenke_check(config: &Configuration) -> bool {
    let n = config.len();
    if diameter(config) > 2.0 * (1.0 + 1e-12) {
        return false;
    }
    match log_discriminant(config) {
        Ok(ld) => ld <= pommerenke_margin(n) + n as f64 * (n as f64).ln(),
        Err(_) => true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SingleMoveScan {
    pub n: usize,
    pub eps_max: f64,
    pub best_eps: f64,
    pub best_log_ratio: f64,
}

/// Scan `eps = eps_max·k/samples`, `k = 1..=samples`, and keep the best
/// `log_ratio`.
pub fn single_move_scan(n: usize, samples: usize) -> Result<SingleMoveScan> {
    let em = eps_max(n, DEFAULT_EPS_TOL)?;
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 1..=samples.max(1) {
        let eps = em * k as f64 / samples.max(1) as f64;
        let lr = log_ratio(&single_diameter_move(n, eps)?)?;
        if lr > best.1 {
            best = (eps, lr);
        }
    }
    Ok(SingleMoveScan {
        n,
        eps_max: em,
        best_eps: best.0,
        best_log_ratio: best.1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RhoAudit {
    pub n: usize,
    pub profile: String,
    pub c: f64,
    pub t: f64,
    /// `[re, im]` of `S_1..S_4` at the flow origin (the regular polygon).
    pub origin_power_sums: Vec<[f64; 2]>,
    /// `[re, im]` of `S_1..S_4` on the constructed configuration.
    pub config_power_sums: Vec<[f64; 2]>,
    pub max_rho: f64,
    pub log_ratio: f64,
    pub audit: Option<TaylorAudit>,
}

pub fn rho_audit(n: usize, profile: &Profile, mode: CMode) -> Result<RhoAudit> {
    let c = match mode {
        CMode::Max { tol } => c_max(n, profile, tol)?.c_max,
        CMode::Fixed(c) => c,
    };
    let config = push_construction(&ConstructionSpec::new(n, c, profile.clone())?)?;
    let origin = pair_statistics(&regular_ngon(n)?, profile, 4, None)?;
    let here = pair_statistics(&config, profile, 4, None)?;
    let lr = log_ratio(&config)?;
    let audit = match taylor_audit(n, c, profile, lr) {
        Ok(a) => Some(a),
        Err(Error::ExpansionDiverges { .. }) => None,
        Err(e) => return Err(e),
    };
    let pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect();
    Ok(RhoAudit {
        n,
        profile: profile.kind().to_string(),
        c,
        t: c / n as f64,
        origin_power_sums: pairs(&origin.power_sums),
        config_power_sums: pairs(&here.power_sums),
        max_rho: here.max_abs,
        log_ratio: lr,
        audit,
    })
}
