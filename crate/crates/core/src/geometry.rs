//! Planar configurations, their diameter and the log of the discriminant.
//!
//! Points are complex numbers. `Δ = ∏_{i≠j} |z_i − z_j|` overflows `f64` long
//! before the sizes of interest, so only `log Δ` is ever computed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

/// A point of the plane, `re + i·im`.
pub type Point2 = Complex64;

/// How the `O(n^2)` pair reductions are combined.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ReductionMode {
    /// Per-row compensated sums merged in row order. Bitwise reproducible
    /// for any thread count.
    #[default]
    Deterministic,
    /// Rayon tree reduction of the per-row sums. The association order
    /// depends on scheduling, so results may differ in the last bits.
    ParallelTree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    points: Vec<Point2>,
    label: String,
}

impl Configuration {
    pub fn new(points: Vec<Point2>, label: impl Into<String>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints(points.len()));
        }
        if let Some((index, z)) = points
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFinitePoint {
                index,
                re: z.re,
                im: z.im,
            });
        }
        Ok(Self {
            points,
            label: label.into(),
        })
    }

    pub fn from_pairs(pairs: &[(f64, f64)], label: impl Into<String>) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
            label,
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; a configuration holds at least two points.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Apply `f` to every point. Fails if the image has non-finite points.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        Self::new(
            self.points.iter().map(|&z| f(z)).collect(),
            self.label.clone(),
        )
    }

    pub fn into_points(self) -> Vec<Point2> {
        self.points
    }
}

/// Largest pairwise distance, by exhaustive scan over all pairs.
pub fn diameter(config: &Configuration) -> f64 {
    let pts = config.points();
    (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let zi = pts[i];
            pts[i + 1..]
                .iter()
                .map(|&zj| (zi - zj).norm())
                .fold(0.0_f64, f64::max)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0_f64, f64::max)
}

/// Indices and length of a pair attaining the diameter (first in index order).
pub fn diameter_pair(config: &Configuration) -> (usize, usize, f64) {
    let pts = config.points();
    let mut best = (0, 1, (pts[0] - pts[1]).norm());
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i] - pts[j]).norm();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    best
}

fn row_log_sum(pts: &[Point2], i: usize) -> Result<NeumaierSum> {
    let zi = pts[i];
    let mut acc = NeumaierSum::new();
    for (off, &zj) in pts[i + 1..].iter().enumerate() {
        let d = (zi - zj).norm();
        if d == 0.0 {
            return Err(Error::Degenerate { i, j: i + 1 + off });
        }
        acc.push(d.ln());
    }
    Ok(acc)
}

/// `log Δ = 2 Σ_{i<j} ln |z_i − z_j|`, deterministic reduction.
pub fn log_discriminant(config: &Configuration) -> Result<f64> {
    log_discriminant_with(config, ReductionMode::Deterministic)
}

pub fn log_discriminant_with(config: &Configuration, mode: ReductionMode) -> Result<f64> {
    let pts = config.points();
    let n = pts.len();
    let total = match mode {
        ReductionMode::Deterministic => {
            let rows = (0..n)
                .into_par_iter()
                .map(|i| row_log_sum(pts, i))
                .collect::<Result<Vec<_>>>()?;
            rows.into_iter().sum::<NeumaierSum>()
        }
        ReductionMode::ParallelTree => (0..n)
            .into_par_iter()
            .map(|i| row_log_sum(pts, i))
            .try_reduce(NeumaierSum::new, |a, b| Ok(a + b))?,
    };
    Ok(2.0 * total.value())
}

/// `log Δ − n ln n`: zero for the regular even n-gon.
pub fn log_ratio(config: &Configuration) -> Result<f64> {
    let n = config.len() as f64;
    Ok(log_discriminant(config)? - n * n.ln())
}

/// Worst-case rounding error of [`log_discriminant`] for `n` points of
/// modulus about 1 given to full precision: each of the `n(n−1)/2` logs can
/// be off by `u·|z|/|z_i − z_j|`, and those reciprocals sum to `O(n² ln n)`.
pub fn log_discriminant_rounding_bound(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) * f64::EPSILON / 2.0 * (1.0 + n.ln())
}

/// Scale about the origin so the diameter becomes `target`.
pub fn rescale_to_diameter(config: &Configuration, target: f64) -> Result<Configuration> {
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target diameter must be positive, got {target}"
        )));
    }
    let d = diameter(config);
    if d == 0.0 {
        return Err(Error::ZeroDiameter);
    }
    let s = target / d;
    config.map_points(|z| z * s)
}

/// Parse the text format: one `re im` pair per line, `#` starts a comment.
pub fn parse_configuration(text: &str, origin: &Path) -> Result<Configuration> {
    let mut points = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(format!(
                "expected 2 fields `re im`, found {}",
                fields.len()
            )));
        }
        let re: f64 = fields[0]
            .parse()
            .map_err(|e| parse_err(format!("bad real part {:?}: {e}", fields[0])))?;
        let im: f64 = fields[1]
            .parse()
            .map_err(|e| parse_err(format!("bad imaginary part {:?}: {e}", fields[1])))?;
        points.push(Complex64::new(re, im));
    }
    let label = origin
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Configuration::new(points, label)
}

pub fn read_configuration(path: &Path) -> Result<Configuration> {
    let text = fs::read_to_string(path)?;
    parse_configuration(&text, path)
}

/// Render in the text format with 17 significant digits per coordinate.
pub fn format_configuration(config: &Configuration) -> String {
    let mut out = String::with_capacity(48 * config.len() + 64);
    let _ = writeln!(out, "# {} n={}", config.label(), config.len());
    for z in config.points() {
        let _ = writeln!(out, "{:.16e} {:.16e}", z.re, z.im);
    }
    out
}

pub fn write_configuration(config: &Configuration, path: &Path) -> Result<()> {
    fs::write(path, format_configuration(config))?;
    Ok(())
}
