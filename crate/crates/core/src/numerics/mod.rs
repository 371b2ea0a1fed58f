//! Quadrature engines and the few special functions the kernels need.

mod dd;
mod hyper;
mod oscillatory;
mod quad;

pub use hyper::{hyp0f1_one, hyp2f1_integral};
pub use oscillatory::sine_transform_decaying;
pub use quad::{
    integrate, integrate_semiinf, integrate_semiinf_algebraic, integrate_semiinf_exp,
    integrate_sqrt_endpoint,
};

use crate::error::{Error, Result};

pub type ComplexScalar = num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub max_series_terms: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            max_series_terms: 400,
        }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be nonnegative, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 || self.max_series_terms < 1 {
            return Err(Error::InvalidParameter(
                "subdivision and series-term limits must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Acceptable absolute error for an estimate of size `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A quadrature or series result together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

impl Estimate {
    pub fn new(value: f64, err: f64) -> Self {
        Self { value, err }
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.value * s, self.err * s.abs())
    }
}

/// Complex signum: the sign of the real part, or of the imaginary part on the
/// imaginary axis.
pub fn csgn(z: ComplexScalar) -> Result<i32> {
    if z.re > 0.0 {
        Ok(1)
    } else if z.re < 0.0 {
        Ok(-1)
    } else if z.im > 0.0 {
        Ok(1)
    } else if z.im < 0.0 {
        Ok(-1)
    } else {
        Err(Error::ZeroInput)
    }
}

/// Generalized binomial coefficient `alpha choose n` for real `alpha`.
pub fn gen_binomial(alpha: f64, n: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..n {
        c *= (alpha - i as f64) / (i + 1) as f64;
    }
    c
}

/// Sum with Neumaier compensation.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn csgn_cases() {
        assert_eq!(csgn(ComplexScalar::new(1.0, -5.0)).unwrap(), 1);
        assert_eq!(csgn(ComplexScalar::new(-0.1, 9.0)).unwrap(), -1);
        assert_eq!(csgn(ComplexScalar::new(0.0, -2.0)).unwrap(), -1);
        assert_eq!(csgn(ComplexScalar::new(0.0, 3.0)).unwrap(), 1);
        assert_eq!(csgn(ComplexScalar::new(0.0, 0.0)), Err(Error::ZeroInput));
    }

    #[test]
    fn binomials() {
        assert_eq!(gen_binomial(0.5, 0), 1.0);
        assert_relative_eq!(gen_binomial(0.5, 2), -0.125);
        assert_relative_eq!(gen_binomial(-0.5, 1), -0.5);
        assert_relative_eq!(gen_binomial(7.0, 3), 35.0);
        assert_eq!(gen_binomial(2.0, 5), 0.0);
    }

    #[test]
    fn settings_validation() {
        assert!(QuadratureSettings::default().validate().is_ok());
        assert!(QuadratureSettings::default().with_rel_tol(0.0).validate().is_err());
        assert!(QuadratureSettings::default().with_abs_tol(-1.0).validate().is_err());
    }

    #[test]
    fn neumaier_recovers_small_addend() {
        let s = compensated_sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }
}
