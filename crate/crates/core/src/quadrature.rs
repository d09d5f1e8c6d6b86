//! The critical double integral
//!
//! ```text
//! I_p = ∫∫_{[0,2π]²} (f(x) − f(y))² (e^{ix} + e^{iy}) / (e^{ix} − e^{iy})² dx dy,
//! f(u) = p(u/2)·e^{iu/2},
//! ```
//!
//! and the constant `C = exp(−I π²/128)` it produces. The diagonal `x = y` is
//! a removable singularity with limit `−2 e^{−ix} f′(x)²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::summation::ComplexSum;

/// Below this separation the integrand is evaluated through its diagonal limit.
pub const DIAGONAL_THRESHOLD: f64 = 1e-6;

pub const MIN_GRID: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub grid_size: usize,
    /// `|I_m − I_{2m}|`.
    pub refinement_gap: f64,
}

impl QuadratureResult {
    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }
}

fn f_of(u: f64, profile: &Profile) -> Complex64 {
    Complex64::from_polar(1.0, 0.5 * u) * profile.value(0.5 * u)
}

fn f_prime(u: f64, profile: &Profile) -> Complex64 {
    let half = 0.5 * u;
    Complex64::new(0.5 * profile.derivative(half), 0.5 * profile.value(half))
        * Complex64::from_polar(1.0, half)
}

/// `−2 e^{−ix} f′(x)²`.
pub fn diagonal_limit(x: f64, profile: &Profile) -> Complex64 {
    let fp = f_prime(x, profile);
    Complex64::from_polar(-2.0, -x) * fp * fp
}

pub fn integrand(x: f64, y: f64, profile: &Profile) -> Complex64 {
    let d = x - y;
    if d.abs() < DIAGONAL_THRESHOLD {
        return diagonal_limit(0.5 * (x + y), profile);
    }
    let df = f_of(x, profile) - f_of(y, profile);
    let ex = Complex64::from_polar(1.0, x);
    let ey = Complex64::from_polar(1.0, y);
    // (e^{ix} − e^{iy})² = −4 sin²((x − y)/2) e^{i(x + y)}, free of cancellation.
    let s = (0.5 * d).sin();
    let denom = Complex64::from_polar(-4.0 * s * s, x + y);
    df * df * (ex + ey) / denom
}

fn midpoint_rule(profile: &Profile, m: usize) -> Complex64 {
    let h = 2.0 * PI / m as f64;
    let rows: Vec<ComplexSum> = (0..m)
        .into_par_iter()
        .map(|a| {
            let x = (a as f64 + 0.5) * h;
            (0..m)
                .map(|b| integrand(x, (b as f64 + 0.5) * h, profile))
                .sum::<ComplexSum>()
        })
        .collect();
    let mut total = ComplexSum::new();
    for r in &rows {
        total.merge(r);
    }
    total.value() * (h * h)
}

/// Tensor-product midpoint rule on an `m × m` grid, with the refinement gap
/// measured against the `2m` grid. Diagonal cells hit `x = y` exactly and
/// use the limit formula.
pub fn integral_i(profile: &Profile, grid: usize) -> Result<QuadratureResult> {
    if grid < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid size must be at least {MIN_GRID}, got {grid}"
        )));
    }
    profile.validate()?;
    let coarse = midpoint_rule(profile, grid);
    let fine = midpoint_rule(profile, 2 * grid);
    Ok(QuadratureResult {
        value: coarse,
        grid_size: grid,
        refinement_gap: (coarse - fine).norm(),
    })
}

/// `exp(−I π²/128)`.
pub fn limit_constant(i_real: f64) -> f64 {
    (-i_real * PI * PI / 128.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_limit_at_origin() {
        let want = Complex64::new(0.5 - 2.0 / (PI * PI), 2.0 / PI);
        assert!((integrand(0.0, 0.0, &Profile::Linear) - want).norm() < 1e-15);
        // Closed form for the linear profile: −2(−1/π + i(1 − x/π)/2)².
        for x in [0.3, 1.0, 2.5, 5.9] {
            let w = Complex64::new(-1.0 / PI, 0.5 * (1.0 - x / PI));
            let closed = w * w * -2.0;
            assert!((diagonal_limit(x, &Profile::Linear) - closed).norm() < 1e-14);
        }
    }

    #[test]
    fn branches_agree_near_the_diagonal() {
        for p in [Profile::Linear, Profile::Cosine] {
            for x in [0.0, 0.7, 3.0, 6.0] {
                let direct = integrand(x, x + 1e-4, &p);
                let limit = diagonal_limit(x + 0.5e-4, &p);
                assert!((direct - limit).norm() < 1e-8, "x={x}: {direct} vs {limit}");
            }
        }
    }

    #[test]
    fn integrand_examples() {
        assert!(integrand(0.0, PI, &Profile::Linear).norm() < 1e-15);
        for (x, y) in [(0.2, 4.0), (1.1, 5.3), (3.0, 0.01)] {
            assert_eq!(
                integrand(x, y, &Profile::Linear),
                integrand(y, x, &Profile::Linear)
            );
        }
        assert_eq!(
            integrand(1.0, 2.0, &Profile::zero()),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn zero_profile_integral_vanishes() {
        let r = integral_i(&Profile::zero(), 16).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        assert_eq!(r.refinement_gap, 0.0);
    }

    #[test]
    fn cosine_profile_integral_vanishes() {
        // f(u) = (1 + e^{iu})/2, so the integrand is (e^{ix} + e^{iy})/4.
        let r = integral_i(&Profile::Cosine, 64).unwrap();
        assert!(r.value.norm() < 1e-12, "{:?}", r);
    }

    #[test]
    fn rejects_small_grid() {
        assert!(matches!(
            integral_i(&Profile::Linear, 4),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn limit_constant_examples() {
        assert!((limit_constant(-0.481436) - 1.03782).abs() < 1e-5);
        assert_eq!(limit_constant(0.0), 1.0);
        assert!((limit_constant(0.481436) * limit_constant(-0.481436) - 1.0).abs() < 1e-15);
    }
}
