//! ₀F₁(;1;x) by series and ₂F₁(a,b;c;z≤0) by quadrature of its Euler-type
//! integral representation.

use std::f64::consts::FRAC_PI_2;

use statrs::function::gamma::ln_gamma;

use super::dd::Dd;
use super::{Estimate, QuadratureSettings};
use crate::error::{Error, Result};

/// `₀F₁(;1;x) = Σ x^m/(m!)²`, summed in double-double so the cancellation
/// for large negative `x` does not cost accuracy.
pub fn hyp0f1_one(x: f64, settings: &QuadratureSettings) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Precondition(format!("argument must be finite, got {x}")));
    }
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let peak = x.abs().sqrt();
    let mut small = 0;
    for m in 1..=settings.max_series_terms {
        let mf = m as f64;
        term = term.mul_f64(x).div_f64(mf * mf);
        sum = sum.add(term);
        if mf > peak && term.hi.abs() <= 1e-34 * sum.hi.abs().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= 2 || term.hi == 0.0 {
                return Ok(sum.to_f64());
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesNotConverged {
        what: "hyp0f1_one",
        terms: settings.max_series_terms,
    })
}

/// Gauss hypergeometric function for `c > b > 0` and `z ≤ 0`:
///
/// `₂F₁(a,b;c;z) = Γ(c)/(Γ(b)Γ(c−b)) ∫_0^∞ t^(c−b−1) (1+t)^(a−c) (t+1−z)^(−a) dt`
///
/// The integral is done with exp-sinh (double exponential) quadrature, which
/// copes with the algebraic endpoint behaviour at 0 and the `t^(−b−1)` tail.
pub fn hyp2f1_integral(a: f64, b: f64, c: f64, z: f64, settings: &QuadratureSettings) -> Result<f64> {
    if !(c > b && b > 0.0) {
        return Err(Error::Precondition(format!(
            "hyp2f1_integral needs c > b > 0, got b={b}, c={c}"
        )));
    }
    if !(z <= 0.0) {
        return Err(Error::Precondition(format!("hyp2f1_integral needs z <= 0, got {z}")));
    }
    let w = 1.0 - z;
    let lnw = w.ln();
    let p = c - b - 1.0;
    let q = a - c;
    // log of integrand times the exp-sinh Jacobian at node x
    let log_term = |x: f64| {
        let lt = FRAC_PI_2 * x.sinh();
        let ln1pt = if lt > 0.0 { lt + (-lt).exp().ln_1p() } else { lt.exp().ln_1p() };
        let lntw = if lt > lnw {
            lt + (w * (-lt).exp()).ln_1p()
        } else {
            lnw + ((lt - lnw).exp()).ln_1p()
        };
        p * lt + q * ln1pt - a * lntw + (FRAC_PI_2 * x.cosh()).ln() + lt
    };
    let est = exp_sinh(|x| log_term(x).exp(), settings)?;
    let norm = (ln_gamma(c) - ln_gamma(b) - ln_gamma(c - b)).exp();
    Ok(norm * est.value)
}

fn exp_sinh<G: Fn(f64) -> f64>(g: G, settings: &QuadratureSettings) -> Result<Estimate> {
    const X_MAX: f64 = 7.0;
    let mut h = 1.0;
    let mut sum = g(0.0);
    let mut j = 1;
    while j as f64 * h <= X_MAX {
        let x = j as f64 * h;
        sum += g(x) + g(-x);
        j += 1;
    }
    let mut prev = h * sum;
    for _level in 0..10 {
        h *= 0.5;
        let mut x = h;
        while x <= X_MAX {
            sum += g(x) + g(-x);
            x += 2.0 * h;
        }
        let cur = h * sum;
        let err = (cur - prev).abs();
        if err <= 0.1 * settings.target(cur) || err <= 4.0 * f64::EPSILON * cur.abs() {
            return Ok(Estimate::new(cur, err));
        }
        prev = cur;
    }
    Err(Error::ToleranceNotMet {
        what: "exp-sinh quadrature",
        value: prev,
        err: f64::NAN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn s() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn hyp0f1_values() {
        let st = s();
        assert_eq!(hyp0f1_one(0.0, &st).unwrap(), 1.0);
        // J0(1) and I0(2)
        assert_relative_eq!(hyp0f1_one(-0.25, &st).unwrap(), 0.7651976865579666, max_relative = 1e-15);
        assert_relative_eq!(hyp0f1_one(1.0, &st).unwrap(), 2.2795853023360673, max_relative = 1e-15);
        // J0(20): heavy cancellation in the plain series
        assert_relative_eq!(hyp0f1_one(-100.0, &st).unwrap(), 0.16702466434058316, max_relative = 1e-13);
    }

    #[test]
    fn hyp0f1_partial_sum_oracle_at_one() {
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        for m in 1..50 {
            term /= (m * m) as f64;
            sum += term;
        }
        assert_relative_eq!(hyp0f1_one(1.0, &s()).unwrap(), sum, max_relative = 1e-15);
    }

    #[test]
    fn hyp0f1_term_limit() {
        let st = QuadratureSettings { max_series_terms: 3, ..s() };
        assert!(matches!(hyp0f1_one(-50.0, &st), Err(Error::SeriesNotConverged { .. })));
    }

    #[test]
    fn hyp2f1_values() {
        let st = s();
        assert_relative_eq!(hyp2f1_integral(1.0, 0.5, 2.0, 0.0, &st).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            hyp2f1_integral(1.0, 0.5, 2.0, -3.0, &st).unwrap(),
            2.0 / 3.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            hyp2f1_integral(1.0, 1.5, 3.0, -1.0, &st).unwrap(),
            0.68629150101523961,
            max_relative = 1e-12
        );
    }

    #[test]
    fn hyp2f1_closed_form_family() {
        let st = s();
        for x in [0.01f64, 0.5, 4.0, 100.0] {
            let expect = 2.0 * ((1.0 + x).sqrt() - 1.0) / x;
            assert_relative_eq!(
                hyp2f1_integral(1.0, 0.5, 2.0, -x, &st).unwrap(),
                expect,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn hyp2f1_preconditions() {
        let st = s();
        assert!(hyp2f1_integral(1.0, 2.0, 2.0, -1.0, &st).is_err());
        assert!(hyp2f1_integral(1.0, 0.5, 2.0, 0.5, &st).is_err());
    }
}
