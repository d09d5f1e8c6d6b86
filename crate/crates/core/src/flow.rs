//! The radial vector field `v(z) = p(|arg z|)·z/|z|`, its flow, and the
//! pairwise differentials `ρ_ij = (v_i − v_j)/(z_i − z_j)`.
//!
//! Under the flow `z_j(t) = z_j + t·v_j` every pair distance scales by
//! `|1 + ρ_ij t|`, so
//!
//! ```text
//! log Δ(t) = log Δ(0) + Σ_{i≠j} log |1 + ρ_ij t|
//! ```
//!
//! and the power sums `S_m = Σ_{i≠j} ρ_ij^m` are the Taylor coefficients of
//! that expansion.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Point2};
use crate::profile::Profile;
use crate::summation::{ComplexSum, NeumaierSum};

/// `v(z)`, with `arg z ∈ [−π, π)`. Undefined at the origin.
pub fn vector_field_at(z: Point2, profile: &Profile) -> Result<Point2> {
    let r = z.norm();
    if r == 0.0 {
        return Err(Error::FieldUndefined { index: 0 });
    }
    // atan2 lands in (−π, π]; the endpoint π stands for −π and |·| is the same.
    let theta = z.im.atan2(z.re).abs();
    Ok(z * (profile.value(theta) / r))
}

pub fn velocities(config: &Configuration, profile: &Profile) -> Result<Vec<Point2>> {
    config
        .points()
        .iter()
        .enumerate()
        .map(|(index, &z)| vector_field_at(z, profile).map_err(|_| Error::FieldUndefined { index }))
        .collect()
}

/// Time-`t` flow. The field is radial with speed depending only on
/// `arg z`, so trajectories are straight rays traversed at constant speed
/// (until they would reach the origin) and the flow is `z + t·v(z)`.
pub fn flow_map(config: &Configuration, t: f64, profile: &Profile) -> Result<Configuration> {
    let v = velocities(config, profile)?;
    let pts = config
        .points()
        .iter()
        .zip(&v)
        .map(|(&z, &vz)| z + vz * t)
        .collect();
    Configuration::new(pts, format!("{}+flow({t})", config.label()))
}

/// Explicit Euler integration of `z' = v(z)` with `steps` equal steps.
/// Diagnostic only: used to confirm that the velocity is constant along
/// trajectories, which is what makes [`flow_map`] exact.
pub fn euler_flow(
    config: &Configuration,
    t: f64,
    profile: &Profile,
    steps: usize,
) -> Result<Configuration> {
    let h = t / steps.max(1) as f64;
    let mut pts = config.points().to_vec();
    for _ in 0..steps.max(1) {
        for (index, z) in pts.iter_mut().enumerate() {
            let v = vector_field_at(*z, profile).map_err(|_| Error::FieldUndefined { index })?;
            *z += v * h;
        }
    }
    Configuration::new(pts, format!("{}+euler({t})", config.label()))
}

/// Symmetric matrix of differentials, stored as the packed strict upper
/// triangle (`ρ_ij = ρ_ji`, diagonal unset).
#[derive(Debug, Clone, PartialEq)]
pub struct RhoMatrix {
    n: usize,
    upper: Vec<Complex64>,
}

impl RhoMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// `ρ_ij`; `None` on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(self.upper[self.offset(i, j)]),
            std::cmp::Ordering::Greater => Some(self.upper[self.offset(j, i)]),
        }
    }

    /// Entries `ρ_ij` with `i < j`, row by row.
    pub fn upper_entries(&self) -> &[Complex64] {
        &self.upper
    }

    fn rows(&self) -> impl Iterator<Item = &[Complex64]> + '_ {
        let mut start = 0;
        (0..self.n).map(move |i| {
            let len = self.n - i - 1;
            let row = &self.upper[start..start + len];
            start += len;
            row
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }
}

fn check_pair(zi: Point2, zj: Point2, i: usize, j: usize) -> Result<Complex64> {
    let dz = zi - zj;
    if dz == Complex64::new(0.0, 0.0) {
        return Err(Error::Degenerate { i, j });
    }
    Ok(dz)
}

pub fn rho_matrix(config: &Configuration, profile: &Profile) -> Result<RhoMatrix> {
    let pts = config.points();
    let v = velocities(config, profile)?;
    let n = pts.len();
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| check_pair(pts[i], pts[j], i, j).map(|dz| (v[i] - v[j]) / dz))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RhoMatrix {
        n,
        upper: rows.concat(),
    })
}

/// `S_m = Σ_{i≠j} ρ_ij^m` for `m = 1..=max_power` (index `m − 1`).
pub fn power_sums(rho: &RhoMatrix, max_power: usize) -> Vec<Complex64> {
    let max_power = max_power.max(1);
    let mut acc = vec![ComplexSum::new(); max_power];
    for row in rho.rows() {
        let mut row_acc = vec![ComplexSum::new(); max_power];
        for &r in row {
            let mut pw = r;
            for slot in row_acc.iter_mut() {
                slot.push(pw);
                pw *= r;
            }
        }
        for (a, r) in acc.iter_mut().zip(&row_acc) {
            a.merge(r);
        }
    }
    acc.iter().map(|s| s.value() * 2.0).collect()
}

/// Pair quantities accumulated in one streaming pass, without materialising
/// the `n × n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PairStatistics {
    /// `S_1 ..= S_max_power`.
    pub power_sums: Vec<Complex64>,
    pub max_abs: f64,
    /// Indices of a pair attaining `max_abs`.
    pub max_pair: (usize, usize),
    /// `Σ_{i≠j} |ρ_ij|^4 / (1 − |ρ_ij t|)^4` when a time was given.
    pub remainder: Option<f64>,
}

#[derive(Clone)]
struct RowStats {
    sums: Vec<ComplexSum>,
    max_abs: f64,
    max_j: usize,
    remainder: NeumaierSum,
}

pub fn pair_statistics(
    config: &Configuration,
    profile: &Profile,
    max_power: usize,
    t: Option<f64>,
) -> Result<PairStatistics> {
    let pts = config.points();
    let v = velocities(config, profile)?;
    let n = pts.len();
    let max_power = max_power.max(1);
    let rows = (0..n)
        .into_par_iter()
        .map(|i| -> Result<RowStats> {
            let mut st = RowStats {
                sums: vec![ComplexSum::new(); max_power],
                max_abs: -1.0,
                max_j: i,
                remainder: NeumaierSum::new(),
            };
            for j in i + 1..n {
                let r = (v[i] - v[j]) / check_pair(pts[i], pts[j], i, j)?;
                let mut pw = r;
                for slot in st.sums.iter_mut() {
                    slot.push(pw);
                    pw *= r;
                }
                let a = r.norm();
                if a > st.max_abs {
                    st.max_abs = a;
                    st.max_j = j;
                }
                if let Some(t) = t {
                    let q = a * t.abs();
                    if q.is_nan() || q >= 1.0 {
                        return Err(Error::ExpansionDiverges { i, j, value: q });
                    }
                    st.remainder.push(a.powi(4) / (1.0 - q).powi(4));
                }
            }
            Ok(st)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sums = vec![ComplexSum::new(); max_power];
    let mut remainder = NeumaierSum::new();
    let mut max_abs = 0.0;
    let mut max_pair = (0, 1);
    for (i, row) in rows.iter().enumerate() {
        for (a, r) in sums.iter_mut().zip(&row.sums) {
            a.merge(r);
        }
        remainder.merge(&row.remainder);
        if row.max_abs > max_abs {
            max_abs = row.max_abs;
            max_pair = (i, row.max_j);
        }
    }
    Ok(PairStatistics {
        power_sums: sums.iter().map(|s| s.value() * 2.0).collect(),
        max_abs,
        max_pair,
        remainder: t.map(|_| 2.0 * remainder.value()),
    })
}

/// Envelope `Σ_{i≠j} |ρ_ij|^4 / (1 − |ρ_ij t|)^4` on the fourth-order Taylor
/// remainder over `[0, t]`. Fails when some `|ρ_ij t| ≥ 1`.
pub fn remainder_power_sum(config: &Configuration, profile: &Profile, t: f64) -> Result<f64> {
    Ok(pair_statistics(config, profile, 1, Some(t))?
        .remainder
        .expect("time supplied"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{push_construction, regular_ngon, ConstructionSpec};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn field_examples() {
        let lin = Profile::Linear;
        assert_eq!(vector_field_at(c(1.0, 0.0), &lin).unwrap(), c(1.0, 0.0));
        assert!(vector_field_at(c(0.0, 1.0), &lin).unwrap().norm() < 1e-16);
        assert!(vector_field_at(c(0.0, -1.0), &lin).unwrap().norm() < 1e-16);
        assert_eq!(vector_field_at(c(-1.0, 0.0), &lin).unwrap(), c(1.0, 0.0));
        assert_eq!(vector_field_at(c(-1.0, -0.0), &lin).unwrap(), c(1.0, 0.0));
        assert!(matches!(
            vector_field_at(c(0.0, 0.0), &lin),
            Err(Error::FieldUndefined { .. })
        ));
    }

    #[test]
    fn field_is_even_and_commutes_with_conjugation() {
        for k in 0..50 {
            let z = Complex64::from_polar(0.9 + 0.01 * k as f64, 0.37 * k as f64 - 3.0);
            for p in [Profile::Linear, Profile::Cosine] {
                let v = vector_field_at(z, &p).unwrap();
                assert!((vector_field_at(-z, &p).unwrap() - v).norm() < 1e-15);
                assert!((vector_field_at(z.conj(), &p).unwrap() - v.conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn flow_examples() {
        let lin = Profile::Linear;
        let sq = regular_ngon(4).unwrap();
        let cc = 1.3;
        let flowed = flow_map(&sq, cc / 4.0, &lin).unwrap();
        let want = [
            c(1.0 + cc / 4.0, 0.0),
            c(0.0, 1.0),
            c(-1.0 + cc / 4.0, 0.0),
            c(0.0, -1.0),
        ];
        for (z, w) in flowed.points().iter().zip(want) {
            assert!((z - w).norm() < 1e-15);
        }
        assert_eq!(flow_map(&sq, 0.0, &lin).unwrap().points(), sq.points());

        let pair = Configuration::from_pairs(&[(1.0, 0.0), (-1.0, 0.0)], "p").unwrap();
        let f = flow_map(&pair, 0.1, &lin).unwrap();
        assert!((f.points()[0] - c(1.1, 0.0)).norm() < 1e-15);
        assert!((f.points()[1] - c(-0.9, 0.0)).norm() < 1e-15);

        let bad = Configuration::from_pairs(&[(1.0, 0.0), (0.0, 0.0)], "o").unwrap();
        assert!(matches!(
            flow_map(&bad, 0.1, &lin),
            Err(Error::FieldUndefined { index: 1 })
        ));
    }

    #[test]
    fn euler_matches_closed_form_flow() {
        let base = regular_ngon(64).unwrap();
        let t = 2.4 / 64.0;
        let exact = flow_map(&base, t, &Profile::Linear).unwrap();
        let euler = euler_flow(&base, t, &Profile::Linear, 200).unwrap();
        for (a, b) in exact.points().iter().zip(euler.points()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rho_examples() {
        let lin = Profile::Linear;
        let rho = rho_matrix(&regular_ngon(4).unwrap(), &lin).unwrap();
        let r01 = rho.get(0, 1).unwrap();
        assert!((r01 - c(0.5, 0.5)).norm() < 1e-15);
        assert_eq!(rho.get(1, 0), rho.get(0, 1));
        assert_eq!(rho.get(2, 2), None);
        assert!(rho.get(0, 2).unwrap().norm() < 1e-15);
        assert!(rho.get(1, 3).unwrap().norm() < 1e-15);
        let r03 = rho.get(0, 3).unwrap();
        assert!((r03 - r01.conj()).norm() < 1e-15);
        assert!((r03.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rho_rejects_degenerate_points() {
        let c2 = Configuration::from_pairs(&[(1.0, 0.0), (0.0, 1.0), (1.0, 0.0)], "d").unwrap();
        assert!(matches!(
            rho_matrix(&c2, &Profile::Linear),
            Err(Error::Degenerate { i: 0, j: 2 })
        ));
    }

    #[test]
    fn streaming_statistics_match_matrix() {
        let cfg =
            push_construction(&ConstructionSpec::new(32, 2.0, Profile::Linear).unwrap()).unwrap();
        let rho = rho_matrix(&cfg, &Profile::Linear).unwrap();
        let sums = power_sums(&rho, 4);
        let st = pair_statistics(&cfg, &Profile::Linear, 4, Some(0.01)).unwrap();
        for (a, b) in sums.iter().zip(&st.power_sums) {
            assert!((a - b).norm() < 1e-12);
        }
        assert_eq!(st.max_abs, rho.max_abs());
        let (i, j) = st.max_pair;
        assert_eq!(rho.get(i, j).unwrap().norm(), st.max_abs);

        let brute: f64 = (0..32)
            .flat_map(|i| (0..32).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| {
                let a = rho.get(i, j).unwrap().norm();
                a.powi(4) / (1.0 - 0.01 * a).powi(4)
            })
            .sum();
        assert!((st.remainder.unwrap() - brute).abs() < 1e-10 * brute);
    }

    #[test]
    fn remainder_examples() {
        let lin = Profile::Linear;
        let ngon = regular_ngon(16).unwrap();
        let rho = rho_matrix(&ngon, &lin).unwrap();
        let fourth: f64 = 2.0
            * rho
                .upper_entries()
                .iter()
                .map(|r| r.norm().powi(4))
                .sum::<f64>();
        let at0 = remainder_power_sum(&ngon, &lin, 0.0).unwrap();
        assert!((at0 - fourth).abs() < 1e-12 * fourth);

        // Both velocities are +1, so the only ρ vanishes.
        let pair = Configuration::from_pairs(&[(1.0, 0.0), (-1.0, 0.0)], "p").unwrap();
        assert_eq!(remainder_power_sum(&pair, &lin, 0.3).unwrap(), 0.0);

        assert!(matches!(
            remainder_power_sum(&ngon, &lin, 10.0),
            Err(Error::ExpansionDiverges { .. })
        ));
    }

    #[test]
    fn odd_power_sums_cancel_at_flow_origin() {
        for n in [8, 30, 64] {
            let rho = rho_matrix(&regular_ngon(n).unwrap(), &Profile::Linear).unwrap();
            let s = power_sums(&rho, 4);
            let scale = 1e-9 * (n * n) as f64;
            assert!(s[0].norm() <= scale && s[2].norm() <= scale, "n={n}: {s:?}");
            assert!(s[1].im.abs() <= scale && s[3].im.abs() <= scale);
        }
    }

    #[test]
    fn real_part_is_mean_of_profile_on_unit_circle() {
        // For unit points e^{ia}, e^{ib}: Re ρ = (p(|a|) + p(|b|))/2.
        for p in [Profile::Linear, Profile::Cosine] {
            for (a, b) in [(0.3, 1.7), (-2.0, 2.9), (0.1, -0.4), (-3.0, -0.2)] {
                let pair = Configuration::new(
                    vec![Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, b)],
                    "u",
                )
                .unwrap();
                let r = rho_matrix(&pair, &p).unwrap().get(0, 1).unwrap();
                let want = 0.5 * (p.value(f64::abs(a)) + p.value(f64::abs(b)));
                assert!((r.re - want).abs() < 1e-12, "{a} {b}");
            }
        }
        // With one endpoint at angle 0 (so the short arc passes through 1),
        // the linear profile gives Re ρ = 1 − angle/π.
        let z = Complex64::from_polar(1.0, 0.8);
        let pair = Configuration::new(vec![c(1.0, 0.0), z], "u").unwrap();
        let r = rho_matrix(&pair, &Profile::Linear)
            .unwrap()
            .get(0, 1)
            .unwrap();
        assert!((r.re - (1.0 - 0.8 / PI)).abs() < 1e-12);
    }
}
