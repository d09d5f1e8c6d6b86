//! Push-amount profiles `p(θ)` on `[0, π]`.
//!
//! A profile sets how far the diameter at angle `θ` is pushed (`δ = c/n · p(θ)`)
//! and, equivalently, the speed of the radial vector field at `|arg z| = θ`.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Slopes steeper than this are treated as jumps.
pub const MAX_TABLE_SLOPE: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `p(θ) = 1 − 2θ/π`.
    Linear,
    /// `p(θ) = cos θ`.
    Cosine,
    Table(TableProfile),
}

/// Piecewise-linear interpolant through `(θ, p)` samples, constant outside
/// the sampled range.
#[derive(Debug, Clone, PartialEq)]
pub struct TableProfile {
    thetas: Vec<f64>,
    values: Vec<f64>,
    source: Option<PathBuf>,
}

impl TableProfile {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::BadProfile(format!(
                "table needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        for (k, &(t, p)) in samples.iter().enumerate() {
            if !(t.is_finite() && p.is_finite()) {
                return Err(Error::BadProfile(format!("sample {k} is not finite")));
            }
        }
        for (k, w) in samples.windows(2).enumerate() {
            let (t0, p0) = w[0];
            let (t1, p1) = w[1];
            if t1 <= t0 {
                return Err(Error::BadProfile(format!(
                    "angles must be strictly increasing (sample {} at {t1} after {t0}); \
                     a repeated angle would be a jump",
                    k + 1
                )));
            }
            let slope = ((p1 - p0) / (t1 - t0)).abs();
            if slope.is_nan() || slope > MAX_TABLE_SLOPE {
                return Err(Error::BadProfile(format!(
                    "slope {slope:e} between samples {k} and {} exceeds the Lipschitz cap {MAX_TABLE_SLOPE:e}",
                    k + 1
                )));
            }
        }
        let first = samples[0].0;
        let last = samples[samples.len() - 1].0;
        if first > 0.0 || last < PI {
            return Err(Error::BadProfile(format!(
                "samples must cover [0, π], got [{first}, {last}]"
            )));
        }
        Ok(Self {
            thetas: samples.iter().map(|s| s.0).collect(),
            values: samples.iter().map(|s| s.1).collect(),
            source: None,
        })
    }

    /// Two-column text file, `θ p` per line, `#` comments.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut samples = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(err(format!(
                    "expected `theta p`, found {} fields",
                    fields.len()
                )));
            }
            let t = fields[0]
                .parse::<f64>()
                .map_err(|e| err(format!("bad angle {:?}: {e}", fields[0])))?;
            let p = fields[1]
                .parse::<f64>()
                .map_err(|e| err(format!("bad value {:?}: {e}", fields[1])))?;
            samples.push((t, p));
        }
        let mut table = Self::new(&samples)?;
        table.source = Some(path.to_path_buf());
        Ok(table)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.thetas.iter().copied().zip(self.values.iter().copied())
    }

    /// Index of the segment `[θ_k, θ_{k+1}]` containing `theta` (clamped).
    fn segment(&self, theta: f64) -> usize {
        let k = self.thetas.partition_point(|&t| t <= theta);
        k.saturating_sub(1).min(self.thetas.len() - 2)
    }

    fn slope(&self, k: usize) -> f64 {
        (self.values[k + 1] - self.values[k]) / (self.thetas[k + 1] - self.thetas[k])
    }

    pub fn value(&self, theta: f64) -> f64 {
        let last = self.thetas.len() - 1;
        if theta <= self.thetas[0] {
            return self.values[0];
        }
        if theta >= self.thetas[last] {
            return self.values[last];
        }
        let k = self.segment(theta);
        self.values[k] + self.slope(k) * (theta - self.thetas[k])
    }

    /// One-sided slope of the interpolant; at an interior node the mean of the
    /// left and right slopes.
    pub fn derivative(&self, theta: f64) -> f64 {
        let last = self.thetas.len() - 1;
        if theta < self.thetas[0] || theta > self.thetas[last] {
            return 0.0;
        }
        let k = self.segment(theta);
        if theta == self.thetas[k] && k > 0 {
            return 0.5 * (self.slope(k - 1) + self.slope(k));
        }
        self.slope(k)
    }

    pub fn lipschitz_constant(&self) -> f64 {
        (0..self.thetas.len() - 1)
            .map(|k| self.slope(k).abs())
            .fold(0.0, f64::max)
    }
}

impl Profile {
    /// The identically zero profile.
    pub fn zero() -> Self {
        Profile::Table(TableProfile::new(&[(0.0, 0.0), (PI, 0.0)]).expect("valid table"))
    }

    pub fn table(samples: &[(f64, f64)]) -> Result<Self> {
        Ok(Profile::Table(TableProfile::new(samples)?))
    }

    /// `linear`, `cosine` or `table:PATH`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "linear" => Ok(Profile::Linear),
            "cosine" => Ok(Profile::Cosine),
            other => match other.strip_prefix("table:") {
                Some(path) if !path.is_empty() => {
                    Ok(Profile::Table(TableProfile::load(Path::new(path))?))
                }
                _ => Err(Error::InvalidArgument(format!(
                    "unknown profile {other:?}; expected linear, cosine or table:PATH"
                ))),
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Profile::Linear => "linear",
            Profile::Cosine => "cosine",
            Profile::Table(_) => "table",
        }
    }

    pub fn value(&self, theta: f64) -> f64 {
        match self {
            Profile::Linear => 1.0 - 2.0 * theta / PI,
            Profile::Cosine => theta.cos(),
            Profile::Table(t) => t.value(theta),
        }
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        match self {
            Profile::Linear => -2.0 / PI,
            Profile::Cosine => -theta.sin(),
            Profile::Table(t) => t.derivative(theta),
        }
    }

    pub fn lipschitz_constant(&self) -> f64 {
        match self {
            Profile::Linear => 2.0 / PI,
            Profile::Cosine => 1.0,
            Profile::Table(t) => t.lipschitz_constant(),
        }
    }

    /// Re-check the admissibility conditions (finite, Lipschitz, covering
    /// `[0, π]`). Built-in kinds always pass.
    pub fn validate(&self) -> Result<()> {
        match self {
            Profile::Linear | Profile::Cosine => Ok(()),
            Profile::Table(t) => {
                let samples: Vec<_> = t.samples().collect();
                TableProfile::new(&samples).map(|_| ())
            }
        }
    }

    /// `p(π − θ) = −p(θ)` at the sampled angles. When this holds the flow of the
    /// field from the roots of unity coincides with the push construction.
    pub fn is_antisymmetric(&self, samples: usize) -> bool {
        (0..=samples).all(|k| {
            let th = PI * k as f64 / samples as f64;
            (self.value(PI - th) + self.value(th)).abs() <= 1e-12
        })
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Table(TableProfile {
                source: Some(path), ..
            }) => write!(f, "table:{}", path.display()),
            other => f.write_str(other.kind()),
        }
    }
}
