//! Sine transforms of decaying functions on the half line.

use std::cell::Cell;
use std::f64::consts::PI;

use super::quad::integrate;
use super::{Estimate, QuadratureSettings};
use crate::error::{Error, Result};

/// Panels are never abandoned as non-decaying before this many.
const MIN_PANELS_FOR_DECAY_TEST: usize = 256;

/// `∫_0^∞ sin(kζ) f(ζ) dζ`, integrated panel by panel between the zeros of
/// `sin(kζ)`. Summation stops once the envelope of `f` on two consecutive
/// panels is below `abs_tol`; slowly decaying cases fall back on Wynn's
/// epsilon extrapolation of the partial sums.
pub fn sine_transform_decaying<F: Fn(f64) -> f64>(
    f: F,
    k: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Precondition(format!("wavenumber must be positive, got {k}")));
    }
    let width = PI / k;
    let floor = settings.abs_tol.max(f64::MIN_POSITIVE);
    let max_panels = settings.max_subdivisions.max(MIN_PANELS_FOR_DECAY_TEST + 1);

    let mut partials: Vec<f64> = Vec::new();
    let mut envelopes: Vec<f64> = Vec::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut quiet = 0;
    let mut last_extrapolations: Vec<f64> = Vec::new();

    for n in 0..max_panels {
        let a = n as f64 * width;
        let b = (n + 1) as f64 * width;
        let env = Cell::new(0.0f64);
        let g = |x: f64| {
            let v = f(x);
            if v.abs() > env.get() {
                env.set(v.abs());
            }
            (k * x).sin() * v
        };
        let est = integrate(g, &[a, b], settings)?;
        total += est.value;
        total_err += est.err;
        partials.push(total);
        envelopes.push(env.get());

        if env.get() * width < floor {
            quiet += 1;
            if quiet >= 2 {
                return Ok(Estimate::new(total, total_err));
            }
        } else {
            quiet = 0;
        }

        if n + 1 >= MIN_PANELS_FOR_DECAY_TEST {
            let m = envelopes.len();
            let head = envelopes[..m / 4].iter().cloned().fold(0.0, f64::max);
            let tail = envelopes[3 * m / 4..].iter().cloned().fold(0.0, f64::max);
            if tail >= head {
                return Err(Error::NonDecaying);
            }
        }

        let peak = envelopes.iter().cloned().fold(0.0, f64::max);
        if partials.len() >= 20 && env.get() < 0.5 * peak {
            let tail = &partials[partials.len() - 20..];
            let ext = wynn_epsilon(tail);
            last_extrapolations.push(ext);
            let l = last_extrapolations.len();
            if l >= 3 {
                let spread = (last_extrapolations[l - 1] - last_extrapolations[l - 2])
                    .abs()
                    .max((last_extrapolations[l - 2] - last_extrapolations[l - 3]).abs());
                if spread <= settings.target(ext) {
                    return Ok(Estimate::new(ext, total_err + spread));
                }
            }
        }
    }
    Err(Error::ToleranceNotMet {
        what: "sine transform",
        value: total,
        err: total_err,
    })
}

/// Wynn's epsilon algorithm; returns the deepest even-column entry.
fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = s[n - 1];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let v = if d == 0.0 { f64::INFINITY } else { prev[i + 1] + 1.0 / d };
            next.push(v);
        }
        prev = cur;
        cur = next;
        col += 1;
        if col % 2 == 0 {
            match cur.last() {
                Some(v) if v.is_finite() => best = *v,
                _ => break,
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn s() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn laplace_sine() {
        let v = sine_transform_decaying(|z: f64| (-z).exp(), 1.0, &s()).unwrap();
        assert_relative_eq!(v.value, 0.5, max_relative = 1e-11);
    }

    #[test]
    fn gaussian_envelope() {
        let v = sine_transform_decaying(|z: f64| (-z * z / 8.0).exp(), 2.0, &s()).unwrap();
        assert_relative_eq!(v.value, 0.54079259162680413, max_relative = 1e-11);
    }

    #[test]
    fn inverse_zeta_regularized() {
        let v = sine_transform_decaying(|z: f64| (-z * z).exp() / z, 1.0, &s()).unwrap();
        assert_relative_eq!(v.value, 0.81759929616592601, max_relative = 1e-11);
    }

    #[test]
    fn slow_algebraic_decay_is_extrapolated() {
        // ∫ sin(z)/z dz = π/2
        let v = sine_transform_decaying(|z: f64| 1.0 / z, 1.0, &s()).unwrap();
        assert_relative_eq!(v.value, PI / 2.0, max_relative = 1e-8);
    }

    #[test]
    fn constant_is_rejected() {
        let r = sine_transform_decaying(|_| 1.0, 1.0, &s());
        assert_eq!(r, Err(Error::NonDecaying));
    }

    #[test]
    fn wynn_on_alternating_harmonic() {
        let mut s = Vec::new();
        let mut acc = 0.0;
        for n in 1..=20 {
            acc += if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
            s.push(acc);
        }
        assert_relative_eq!(wynn_epsilon(&s), 2f64.ln(), max_relative = 1e-12);
    }
}
