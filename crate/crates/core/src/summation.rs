//! Compensated (Kahan–Babuška–Neumaier) accumulators.
//!
//! Pair sums over `n(n-1)/2` terms whose total is `O(n^2)` while the signal
//! of interest is `O(1)` lose several digits with naive accumulation; these
//! accumulators keep the running rounding residue separately.

use std::iter::Sum;
use std::ops::{Add, AddAssign};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub const fn new() -> Self {
        Self {
            sum: 0.0,
            comp: 0.0,
        }
    }

    pub fn push(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge another accumulator, keeping both residues.
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.push(other.sum);
        self.push(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.push(rhs);
    }
}

impl Add for NeumaierSum {
    type Output = NeumaierSum;

    fn add(mut self, rhs: Self) -> Self::Output {
        self.merge(&rhs);
        self
    }
}

impl Sum<f64> for NeumaierSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}

impl Sum<NeumaierSum> for NeumaierSum {
    fn sum<I: Iterator<Item = NeumaierSum>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.merge(&x);
        }
        acc
    }
}

/// Componentwise compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub const fn new() -> Self {
        Self {
            re: NeumaierSum::new(),
            im: NeumaierSum::new(),
        }
    }

    pub fn push(&mut self, z: Complex64) {
        self.re.push(z.re);
        self.im.push(z.im);
    }

    pub fn merge(&mut self, other: &ComplexSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl Sum<Complex64> for ComplexSum {
    fn sum<I: Iterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexSum::new();
        for z in iter {
            acc.push(z);
        }
        acc
    }
}

/// Compensated sum of a slice, in index order.
pub fn compensated_sum(values: &[f64]) -> f64 {
    values.iter().copied().sum::<NeumaierSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let values = [1.0, 1e100, 1.0, -1e100];
        let naive: f64 = values.iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(compensated_sum(&values), 2.0);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|k| 0.1 * k as f64 + 1e-9).collect();
        let whole = compensated_sum(&xs);
        let mut left: NeumaierSum = xs[..400].iter().copied().sum();
        let right: NeumaierSum = xs[400..].iter().copied().sum();
        left.merge(&right);
        assert!((left.value() - whole).abs() <= 1e-12 * whole.abs());
    }

    #[test]
    fn complex_accumulates_componentwise() {
        let s: ComplexSum = [
            Complex64::new(1e16, 1.0),
            Complex64::new(1.0, -1e16),
            Complex64::new(-1e16, 1e16),
        ]
        .into_iter()
        .sum();
        assert_eq!(s.value(), Complex64::new(1.0, 1.0));
    }
}
