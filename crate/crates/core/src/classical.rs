//! Classical relativistic arrival times and the asymptotic index of
//! refraction they imply.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{gb_factor, BarrierSpec, PhysicalParams, Region};
use crate::numerics::{
    gen_binomial, hyp2f1_integral, integrate_semiinf, integrate_semiinf_algebraic, QuadratureSettings,
};

fn energy(p: f64, params: &PhysicalParams) -> f64 {
    (p * p * params.c * params.c + params.rest_energy().powi(2)).sqrt()
}

/// Time to reach the origin from `q` with momentum `p`, integrating the
/// inverse velocity `(H−V)/(c√((H−V)²−μ²c⁴))` region by region.
pub fn crtoa_quadrature(q: f64, p: f64, barrier: &BarrierSpec, params: &PhysicalParams) -> Result<f64> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::Precondition(format!("momentum must be nonzero, got {p}")));
    }
    let v_at = |x: f64| if x > barrier.a && x < barrier.b { barrier.v0 } else { 0.0 };
    let h = energy(p, params) + v_at(q);
    let (lo, hi) = if q < 0.0 { (q, 0.0) } else { (0.0, q) };
    let mut edges = vec![lo];
    for e in [barrier.a, barrier.b] {
        if e > lo && e < hi {
            edges.push(e);
        }
    }
    edges.push(hi);
    let m2c4 = params.rest_energy().powi(2);
    let mut t = 0.0;
    for w in edges.windows(2) {
        let kin = h - v_at(0.5 * (w[0] + w[1]));
        let rad = kin * kin - m2c4;
        if !(kin > 0.0 && rad > 0.0) {
            return Err(Error::Forbidden(format!(
                "turning point between {} and {}",
                w[0], w[1]
            )));
        }
        t += (w[1] - w[0]) * kin / (params.c * rad.sqrt());
    }
    if q > 0.0 {
        t = -t;
    }
    Ok(if p > 0.0 { t } else { -t })
}

/// Closed-form classical arrival times obtained as the classical limit of
/// the region kernels.
pub fn classical_toa_closed(
    region: Region,
    q0: f64,
    p0: f64,
    barrier: &BarrierSpec,
    params: &PhysicalParams,
) -> Result<f64> {
    if p0 == 0.0 || !p0.is_finite() {
        return Err(Error::Precondition(format!("momentum must be nonzero, got {p0}")));
    }
    let g = (1.0 + (p0 / params.mc()).powi(2)).sqrt();
    let v = barrier.v0 / params.rest_energy();
    let free = |d: f64| -params.mu * d / p0 * g;
    let top = |len: f64, shifted: f64| -> Result<f64> {
        let rad = shifted * shifted - 1.0;
        if !(rad > 0.0) {
            return Err(Error::Forbidden(format!(
                "imaginary root: (γ ± V/μc²)² − 1 = {rad}"
            )));
        }
        Ok(len / params.c * g / rad.sqrt())
    };
    match region {
        Region::I => Ok(free(q0)),
        Region::II => {
            let d = -barrier.b;
            Ok(free(q0 + d) + top(d, g + v)?)
        }
        Region::III => {
            let l = barrier.length();
            Ok(free(q0 + l) + top(l, g - v)?)
        }
    }
}

/// Critical wavenumber `κ_c = √(2μV/ħ² (1 + V/(2μc²)))`.
pub fn kappa_c(v0: f64, params: &PhysicalParams) -> Result<f64> {
    if !(v0 >= 0.0 && v0 < params.rest_energy()) {
        return Err(Error::InvalidParameter(format!(
            "barrier height {v0} outside [0, μc²)"
        )));
    }
    Ok((2.0 * params.mu * v0 / (params.hbar * params.hbar) * (1.0 + v0 / (2.0 * params.rest_energy()))).sqrt())
}

fn above_barrier_ratio(e: f64, v0: f64, params: &PhysicalParams) -> Result<f64> {
    let rad = (e - v0).powi(2) - params.rest_energy().powi(2);
    if !(rad > 0.0 && e > v0) {
        return Err(Error::Forbidden(format!(
            "energy {e} is not above the barrier {v0}"
        )));
    }
    Ok((e * e / rad).sqrt())
}

/// Classical time over the top of a barrier of length `len`,
/// `t_c √(E²/((E−V)²−μ²c⁴))` with `t_c = len/c`.
pub fn tau_top(k: f64, v0: f64, len: f64, params: &PhysicalParams) -> Result<f64> {
    let kc = kappa_c(v0, params)?;
    if !(k > kc) {
        return Err(Error::Forbidden(format!("k = {k} not above κ_c = {kc}")));
    }
    let e = energy(params.hbar * k, params);
    Ok(len / params.c * above_barrier_ratio(e, v0, params)?)
}

/// Asymptotic index of refraction `(p/μc) √(E²/((E−V)²−μ²c⁴))`.
pub fn rc_asymptotic(p0: f64, v0: f64, params: &PhysicalParams) -> Result<f64> {
    let e = energy(p0, params);
    Ok(p0 / params.mc() * above_barrier_ratio(e, v0, params)?)
}

/// Free-flight correction `√(1 + p²/μ²c²)`.
pub fn qc_asymptotic(p0: f64, params: &PhysicalParams) -> f64 {
    (1.0 + (p0 / params.mc()).powi(2)).sqrt()
}

/// Partial resummation of the index of refraction in powers of the barrier
/// height up to order `j_max`, plus the branch-cut contribution.
pub fn rc_series_resummation(
    p0: f64,
    v0: f64,
    j_max: usize,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(p0 > 0.0) {
        return Err(Error::Precondition(format!("momentum must be positive, got {p0}")));
    }
    let v = v0 / params.rest_energy();
    if !(v.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!("barrier height {v0} not below μc²")));
    }
    let x = (p0 / params.mc()).powi(2);
    if !(p0 / params.hbar > kappa_c(v0.abs(), params)?) {
        return Err(Error::Divergence {
            what: "index-of-refraction resummation",
            terms: 0,
        });
    }
    let g = (1.0 + x).sqrt();
    let mut series = 0.0;
    let mut central = 1.0;
    for j in 0..=j_max {
        let jf = j as f64;
        if j > 0 {
            central *= 2.0 * (2.0 * jf - 1.0) / jf * v / (2.0 * x);
        }
        let mut inner = 0.0;
        let mut binom = 1.0;
        for k in 0..=j {
            if k > 0 {
                binom *= (j - k + 1) as f64 / k as f64;
            }
            let kf = k as f64;
            let coeff = binom * (-0.5 * v).powi((j - k) as i32);
            let f21 = hyp2f1_integral(1.0, 0.5 + jf - 0.5 * kf, jf + 2.0, -x, settings)?;
            let brace = g.powi(k as i32 + 1) - x.powi(j as i32 + 1) * gen_binomial(0.5 * (kf + 1.0), j + 1) * f21;
            inner += coeff * brace;
        }
        series += central * inner;
    }
    let branch = integrate_semiinf(
        |z: f64| x / (z * z + x) * (z * z - 1.0).sqrt() / z * gb_factor(v0, z, params).unwrap_or(f64::NAN),
        1.0,
        x.sqrt().max(1.0),
        &[],
        settings,
    )?;
    Ok(series + 2.0 / PI * branch.value)
}

/// `∫_1^∞ √(z²−1)/z · a²/(a²+b²z²) dz` by truncation and tail extrapolation.
pub fn residue_identity_integral(a: f64, b: f64, settings: &QuadratureSettings) -> Result<f64> {
    let (a2, b2) = (a * a, b * b);
    Ok(integrate_semiinf_algebraic(|z: f64| (z * z - 1.0).sqrt() / z * a2 / (a2 + b2 * z * z), 1.0, settings)?.value)
}

/// Closed value of [`residue_identity_integral`], `(π/2)(√(1+a²/b²) − 1)`.
pub fn residue_identity_closed(a: f64, b: f64) -> f64 {
    0.5 * PI * ((1.0 + a * a / (b * b)).sqrt() - 1.0)
}
