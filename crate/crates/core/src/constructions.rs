//! Generators for the configuration families: regular polygons, the
//! profile-driven diameter push, and the single-diameter move.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Configuration;
use crate::profile::Profile;

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionSpec {
    pub n: usize,
    /// Push strength; the diameter at angle `2πk/n` moves by `c/n · p(2πk/n)`.
    pub c: f64,
    pub profile: Profile,
}

impl ConstructionSpec {
    pub fn new(n: usize, c: f64, profile: Profile) -> Result<Self> {
        check_even(n)?;
        if !c.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "push strength must be finite, got {c}"
            )));
        }
        Ok(Self { n, c, profile })
    }
}

pub(crate) fn check_even(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        Err(Error::NotEvenN(n))
    } else {
        Ok(())
    }
}

/// `e^{2πik/n}`.
pub fn root_of_unity(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// Regular n-gon of diameter 2.
///
/// For even `n` these are the roots of unity, with index `k + n/2` stored as
/// the exact negation of index `k`. For odd `n` the polygon is enlarged by
/// `1/cos(π/(2n))` so that its longest diagonal is 2.
pub fn regular_ngon(n: usize) -> Result<Configuration> {
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let points = if n.is_multiple_of(2) {
        let half: Vec<Complex64> = (0..n / 2).map(|k| root_of_unity(k, n)).collect();
        half.iter()
            .copied()
            .chain(half.iter().map(|&w| -w))
            .collect()
    } else {
        let r = 1.0 / (PI / (2.0 * n as f64)).cos();
        (0..n).map(|k| root_of_unity(k, n) * r).collect()
    };
    Configuration::new(points, format!("ngon-{n}"))
}

/// Push amounts `δ_k = (c/n)·p(2πk/n)` for `k = 0..n/2`.
pub fn push_amounts(spec: &ConstructionSpec) -> Vec<f64> {
    let n = spec.n;
    (0..n / 2)
        .map(|k| spec.c / n as f64 * spec.profile.value(2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// `z_k = (1 + δ_k)ω_k`, `z_{k+n/2} = −(1 − δ_k)ω_k`: each diameter of the
/// regular n-gon translated along itself by `δ_k`, keeping its length 2.
pub fn push_construction(spec: &ConstructionSpec) -> Result<Configuration> {
    check_even(spec.n)?;
    let n = spec.n;
    let deltas = push_amounts(spec);
    let omegas: Vec<Complex64> = (0..n / 2).map(|k| root_of_unity(k, n)).collect();
    let outer = omegas.iter().zip(&deltas).map(|(&w, &d)| w * (1.0 + d));
    let inner = omegas.iter().zip(&deltas).map(|(&w, &d)| -(w * (1.0 - d)));
    let points = outer.chain(inner).collect();
    Configuration::new(
        points,
        format!("push-{}-n{}-c{}", spec.profile.kind(), n, spec.c),
    )
}

/// Regular even n-gon with the diameter `(1, −1)` (indices 0 and n/2)
/// translated by `eps` along the real axis.
pub fn single_diameter_move(n: usize, eps: f64) -> Result<Configuration> {
    check_even(n)?;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "eps must be finite and >= 0, got {eps}"
        )));
    }
    let mut points = regular_ngon(n)?.into_points();
    points[0] += eps;
    points[n / 2] += eps;
    Configuration::new(points, format!("move-n{n}-eps{eps}"))
}
