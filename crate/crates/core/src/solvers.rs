//! Largest push strength (or flow time, or single-diameter shift) that keeps
//! the diameter at 2, found by bisection on a feasibility predicate.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{
    check_even, push_construction, regular_ngon, single_diameter_move, ConstructionSpec,
};
use crate::error::{Error, Result};
use crate::flow::velocities;
use crate::geometry::Point2;
use crate::profile::Profile;

pub const C_UPPER: f64 = 8.0;
pub const EPS_UPPER: f64 = 1.0;
pub const DEFAULT_C_TOL: f64 = 1e-10;
pub const DEFAULT_EPS_TOL: f64 = 1e-12;

/// Final bracket of a bisection: `predicate(lo)` holds, `predicate(hi)` fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bisection {
    pub lo: f64,
    pub hi: f64,
    pub iterations: u32,
}

/// Bisection for the boundary of a feasible set `{x : pred(x)}` that is an
/// interval starting at `lo`. The bracket endpoints are checked first; a bad
/// bracket is an error, never clamped.
pub fn bisect_feasible(
    pred: impl Fn(f64) -> bool,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Bisection> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !pred(lo) {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "predicate fails at the lower end".into(),
        });
    }
    if pred(hi) {
        return Err(Error::Bracket {
            lo,
            hi,
            reason: "predicate still holds at the upper end".into(),
        });
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(Bisection { lo, hi, iterations })
}

fn is_excluded(i: usize, j: usize, half: usize) -> bool {
    j == i + half
}

/// All pairs except the translated diameters `(k, k + n/2)` are within
/// distance 2.
fn push_pairs_within_two(points: &[Point2]) -> bool {
    let half = points.len() / 2;
    (0..points.len()).into_par_iter().all(|i| {
        let zi = points[i];
        points[i + 1..]
            .iter()
            .enumerate()
            .all(|(off, &zj)| is_excluded(i, i + 1 + off, half) || (zi - zj).norm_sqr() <= 4.0)
    })
}

/// Largest non-excluded pair distance, first pair in index order on ties.
fn binding_pair(points: &[Point2]) -> (usize, usize, f64) {
    let half = points.len() / 2;
    let rows: Vec<(usize, usize, f64)> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let mut best = (i, i, -1.0);
            for j in i + 1..points.len() {
                if is_excluded(i, j, half) {
                    continue;
                }
                let d = (points[i] - points[j]).norm();
                if d > best.2 {
                    best = (i, j, d);
                }
            }
            best
        })
        .collect();
    rows.into_iter()
        .fold((0, 0, -1.0), |acc, r| if r.2 > acc.2 { r } else { acc })
}

/// Angle at the origin between two points, in `[0, π]`.
pub fn angle_between(a: Point2, b: Point2) -> f64 {
    (a * b.conj()).arg().abs()
}

pub fn push_is_feasible(n: usize, c: f64, profile: &Profile) -> Result<bool> {
    let cfg = push_construction(&ConstructionSpec::new(n, c, profile.clone())?)?;
    Ok(push_pairs_within_two(cfg.points()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BindingReport {
    pub n: usize,
    pub c_max: f64,
    /// Infeasible end of the final bracket.
    pub c_upper: f64,
    pub binding_pair: (usize, usize),
    pub binding_distance: f64,
    /// Angle at the origin between the binding points, radians.
    pub binding_angle: f64,
    pub iterations: u32,
}

/// The binding pair of the push configuration at strength `c`.
pub fn binding_at(n: usize, c: f64, profile: &Profile) -> Result<(usize, usize, f64, f64)> {
    let cfg = push_construction(&ConstructionSpec::new(n, c, profile.clone())?)?;
    let pts = cfg.points();
    let (i, j, d) = binding_pair(pts);
    Ok((i, j, d, angle_between(pts[i], pts[j])))
}

/// Largest push strength keeping every non-translated pair within distance 2.
pub fn c_max(n: usize, profile: &Profile, tol: f64) -> Result<BindingReport> {
    check_even(n)?;
    profile.validate()?;
    let pred = |c: f64| push_is_feasible(n, c, profile).unwrap_or(false);
    if tol > 0.0 && !pred(tol) {
        return Err(Error::NoFeasiblePush(tol));
    }
    let b = bisect_feasible(pred, 0.0, C_UPPER, tol)?;
    let (i, j, d, angle) = binding_at(n, b.lo, profile)?;
    Ok(BindingReport {
        n,
        c_max: b.lo,
        c_upper: b.hi,
        binding_pair: (i, j),
        binding_distance: d,
        binding_angle: angle,
        iterations: b.iterations,
    })
}

/// Flow time equivalent of [`c_max`]: `c_max / n`.
pub fn t_max(n: usize, profile: &Profile, tol: f64) -> Result<f64> {
    Ok(c_max(n, profile, tol)?.c_max / n as f64)
}

fn moved_pair_within_two(points: &[Point2]) -> bool {
    let half = points.len() / 2;
    [0, half].iter().all(|&m| {
        points
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != 0 && k != half)
            .all(|(_, &z)| (points[m] - z).norm_sqr() <= 4.0)
    })
}

/// Largest shift of the diameter `(1, −1)` keeping its distances to all
/// other points within 2.
pub fn eps_max(n: usize, tol: f64) -> Result<f64> {
    check_even(n)?;
    let pred = |eps: f64| {
        single_diameter_move(n, eps)
            .map(|c| moved_pair_within_two(c.points()))
            .unwrap_or(false)
    };
    Ok(bisect_feasible(pred, 0.0, EPS_UPPER, tol)?.lo)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TmaxEstimate {
    pub t: f64,
    pub pair: (usize, usize),
    pub angle: f64,
}

/// First-order flow-time estimate from the regular polygon:
/// `min −ln(|z_i − z_j|/2) / Re ρ_ij` over pairs approaching each other
/// (`Re ρ_ij > 0`). Independent of the bisection; used to check its rate.
pub fn t_max_estimate(n: usize, profile: &Profile) -> Result<TmaxEstimate> {
    check_even(n)?;
    let base = regular_ngon(n)?;
    let pts = base.points();
    let v = velocities(&base, profile)?;
    let rows: Vec<Option<(f64, usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<(f64, usize, usize)> = None;
            for j in i + 1..n {
                let dz = pts[i] - pts[j];
                let rho: Complex64 = (v[i] - v[j]) / dz;
                let dist = dz.norm();
                if rho.re <= 0.0 || dist >= 2.0 {
                    continue;
                }
                let t = -(dist / 2.0).ln() / rho.re;
                if best.is_none_or(|b| t < b.0) {
                    best = Some((t, i, j));
                }
            }
            best
        })
        .collect();
    let (t, i, j) = rows
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(f64, usize, usize)>, r| match acc {
            Some(a) if a.0 <= r.0 => Some(a),
            _ => Some(r),
        })
        .ok_or_else(|| Error::InvalidArgument("no approaching pair".into()))?;
    Ok(TmaxEstimate {
        t,
        pair: (i, j),
        angle: angle_between(pts[i], pts[j]),
    })
}
