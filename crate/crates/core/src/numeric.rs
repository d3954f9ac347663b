//! Compensated accumulation and tolerance comparisons.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of complex terms, real and imaginary parts tracked separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexKahanSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexKahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexKahanSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = ComplexKahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<KahanSum>().value()
}

/// Relative tolerance with an absolute floor for values near zero.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const IDENTITY: Tolerance = Tolerance { rel: 1e-12, abs: 1e-14 };

    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    /// Admissible error for quantities of magnitude `scale`.
    pub fn allowance(&self, scale: f64) -> f64 {
        (self.rel * scale).max(self.abs)
    }

    /// `|a - b| <= max(rel * scale, abs)` where `scale` is at least `max(|a|, |b|)`.
    pub fn close_c(&self, a: Complex64, b: Complex64, scale: f64) -> bool {
        (a - b).norm() <= self.allowance(scale.max(a.norm()).max(b.norm()))
    }

    pub fn close(&self, a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= self.allowance(scale.max(a.abs()).max(b.abs()))
    }
}

pub fn relative_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut values = vec![1.0e16];
        values.extend(std::iter::repeat_n(1.0, 1000));
        values.push(-1.0e16);
        assert_eq!(kahan_sum(values.iter().copied()), 1000.0);
        // naive summation loses every unit term
        assert_eq!(values.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn tolerance_floor_applies_near_zero() {
        let tol = Tolerance::IDENTITY;
        assert!(tol.close(1e-15, 0.0, 0.0));
        assert!(!tol.close(1e-13, 0.0, 0.0));
        assert!(tol.close(1.0 + 1e-13, 1.0, 0.0));
    }
}
