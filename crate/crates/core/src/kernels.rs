//! Time-kernel factors for the free particle and the square barrier.
//!
//! Internally everything is evaluated in scaled variables: lengths in units
//! of the Compton length `ħ/(μc)` and energies in units of `μc²`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::numerics::{
    gen_binomial, integrate, integrate_semiinf_exp, ComplexScalar, Estimate, QuadratureSettings,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mu: f64,
    pub c: f64,
    pub hbar: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            mu: 1.0,
            c: 1.0,
            hbar: 1.0,
        }
    }
}

impl PhysicalParams {
    pub fn new(mu: f64, c: f64, hbar: f64) -> Result<Self> {
        let p = Self { mu, c, hbar };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mu", self.mu), ("c", self.c), ("hbar", self.hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// μc².
    pub fn rest_energy(&self) -> f64 {
        self.mu * self.c * self.c
    }

    /// μc.
    pub fn mc(&self) -> f64 {
        self.mu * self.c
    }

    /// ħ/(μc), the unit of length for scaled variables.
    pub fn compton_length(&self) -> f64 {
        self.hbar / self.mc()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// Between the barrier and the arrival point, `b < q < 0`.
    I,
    /// On top of the barrier, `a < q < b`.
    II,
    /// Left of the barrier, `q < a`.
    III,
}

impl Region {
    pub fn of(q: f64, barrier: &BarrierSpec) -> Region {
        if q < barrier.a {
            Region::III
        } else if q < barrier.b {
            Region::II
        } else {
            Region::I
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    pub v0: f64,
    pub a: f64,
    pub b: f64,
}

impl BarrierSpec {
    pub fn new(v0: f64, a: f64, b: f64, params: &PhysicalParams) -> Result<Self> {
        let s = Self { v0, a, b };
        s.validate(params)?;
        Ok(s)
    }

    pub fn validate(&self, params: &PhysicalParams) -> Result<()> {
        if !(self.a < self.b && self.b < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "barrier edges need a < b < 0, got a={}, b={}",
                self.a, self.b
            )));
        }
        if !(self.v0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "barrier height must be positive, got {}",
                self.v0
            )));
        }
        if !(self.v0 < params.rest_energy()) {
            return Err(Error::InvalidParameter(format!(
                "barrier height {} must stay below the rest energy {}",
                self.v0,
                params.rest_energy()
            )));
        }
        Ok(())
    }

    /// Barrier length `b − a`.
    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEval {
    pub zeta: f64,
    pub value: f64,
    pub err: f64,
}

fn check_zeta(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("zeta must be positive, got {zeta}")))
    }
}

fn check_height(v0: f64, params: &PhysicalParams) -> Result<f64> {
    let v = v0 / params.rest_energy();
    if v.abs() < 1.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!(
            "|v0| = {} must stay below the rest energy",
            v0.abs()
        )))
    }
}

/// `(2/π)∫_1^∞ e^(−ζz) √(z²−1)/z · g(z) dz` in scaled variables.
fn branch_term<G: Fn(f64) -> f64>(zeta_hat: f64, g: G, settings: &QuadratureSettings) -> Result<Estimate> {
    let est = integrate_semiinf_exp(|z| (z * z - 1.0).sqrt() / z * g(z), 1.0, zeta_hat, settings)?;
    Ok(est.scale(2.0 / PI))
}

/// Free-particle kernel factor `T_F(ζ)`.
pub fn free_factor(zeta: f64, params: &PhysicalParams, settings: &QuadratureSettings) -> Result<KernelEval> {
    check_zeta(zeta)?;
    let b = branch_term(zeta / params.compton_length(), |_| 1.0, settings)?;
    Ok(KernelEval {
        zeta,
        value: 1.0 + b.value,
        err: b.err,
    })
}

fn gb_scaled(v: f64, z: f64) -> f64 {
    let z2 = z * z;
    let w = ComplexScalar::new(1.0 - v * v / z2, 2.0 * (z2 - 1.0).max(0.0).sqrt() / z2 * v);
    (1.0 / w.sqrt()).re
}

/// Branch-cut weight `G_B(V, z)`, the real part of the principal
/// `[1 − V²/z² + 2i V √(z²−1)/z²]^(−1/2)` (V in units of μc²). Even in `v0`.
pub fn gb_factor(v0: f64, z: f64, params: &PhysicalParams) -> Result<f64> {
    if !(z >= 1.0) {
        return Err(Error::Precondition(format!("gb_factor needs z >= 1, got {z}")));
    }
    let v = check_height(v0, params)?;
    Ok(gb_scaled(v, z))
}

/// Coefficients of the residue series for a fixed scaled height:
/// `F_B = Σ_l Σ_{n≤l} a[l][n] ζ^(2l−2n)/(2l−2n)!` (scaled ζ).
#[derive(Debug, Clone)]
pub struct ResidueSeries {
    half_v: f64,
    rows: Vec<Vec<f64>>,
    gbin: Vec<Vec<f64>>,
    central: f64,
}

impl ResidueSeries {
    /// `v` is the signed height in units of μc².
    pub fn new(v: f64) -> Self {
        Self {
            half_v: 0.5 * v,
            rows: vec![vec![1.0]],
            gbin: vec![],
            central: 1.0,
        }
    }

    fn ensure(&mut self, l_max: usize) {
        while self.rows.len() <= l_max {
            let l = self.rows.len();
            let lf = l as f64;
            // (2l)!/(l!)² (v/2)^l, built as a running product
            self.central *= 2.0 * (2.0 * lf - 1.0) / lf * self.half_v;
            let w = self.half_v;
            while self.gbin.len() <= l {
                self.gbin.push(vec![1.0]);
            }
            for (m, row) in self.gbin.iter_mut().enumerate() {
                let alpha = 0.5 * (m as f64 + 1.0);
                while row.len() <= l {
                    let n = row.len();
                    let prev = row[n - 1];
                    row.push(prev * (alpha - (n - 1) as f64) / n as f64);
                }
            }
            // C(l,m) w^(l−m), from m = l downwards
            let mut bw = vec![0.0; l + 1];
            bw[l] = 1.0;
            for m in (0..l).rev() {
                bw[m] = bw[m + 1] * (m + 1) as f64 / (l - m) as f64 * w;
            }
            let mut row = Vec::with_capacity(l + 1);
            for n in 0..=l {
                let mut e = 0.0;
                for (m, b) in bw.iter().enumerate() {
                    e += b * self.gbin[m][n];
                }
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                row.push(self.central * sign * e);
            }
            self.rows.push(row);
        }
    }

    /// Row `l`, the coefficients `a[l][0..=l]`.
    pub fn row(&mut self, l: usize) -> &[f64] {
        self.ensure(l);
        &self.rows[l]
    }

    /// Rows computed so far.
    pub fn rows_ready(&self) -> usize {
        self.rows.len()
    }

    fn row_ready(&self, l: usize) -> &[f64] {
        &self.rows[l]
    }
}

/// Residue-series evaluation with the stopping rules: converged after three
/// consecutive terms below `abs_tol·(1+|sum|)`, divergent after five
/// consecutive growing terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
    /// Largest term magnitude; compared with `value` it measures cancellation.
    pub max_term: f64,
}

fn sum_series<T: FnMut(usize) -> Option<f64>>(
    mut term: T,
    what: &'static str,
    settings: &QuadratureSettings,
) -> Result<SeriesValue> {
    let mut sum = 0.0;
    let mut small = 0;
    let mut growing = 0;
    let mut prev = f64::INFINITY;
    let mut max_term: f64 = 0.0;
    for l in 0..settings.max_series_terms {
        let Some(t) = term(l) else {
            return Err(Error::SeriesNotConverged { what, terms: l });
        };
        sum += t;
        max_term = max_term.max(t.abs());
        if !sum.is_finite() {
            return Err(Error::Divergence { what, terms: l + 1 });
        }
        if t.abs() < settings.abs_tol * (1.0 + sum.abs()) {
            small += 1;
            if small >= 3 {
                return Ok(SeriesValue {
                    value: sum,
                    terms_used: l + 1,
                    max_term,
                });
            }
        } else {
            small = 0;
        }
        if l > 0 && t.abs() > prev {
            growing += 1;
            if growing >= 5 {
                return Err(Error::Divergence { what, terms: l + 1 });
            }
        } else {
            growing = 0;
        }
        prev = t.abs();
    }
    Err(Error::SeriesNotConverged {
        what,
        terms: settings.max_series_terms,
    })
}

fn eval_residue(series: &ResidueSeries, zeta_hat: f64, settings: &QuadratureSettings) -> Result<SeriesValue> {
    let z2 = zeta_hat * zeta_hat;
    let mut powers = vec![1.0];
    sum_series(
        |l| {
            if l >= series.rows_ready() {
                return None;
            }
            let j = powers.len();
            if j <= l {
                let jf = j as f64;
                let next = powers[j - 1] * z2 / ((2.0 * jf) * (2.0 * jf - 1.0));
                powers.push(next);
            }
            let row = series.row_ready(l);
            Some((0..=l).map(|n| row[n] * powers[l - n]).sum())
        },
        "residue series",
        settings,
    )
}

/// Residue part `F_B(v0, ζ)` of the barrier factor, as the power series in
/// the barrier height.
pub fn fb_series(
    v0: f64,
    zeta: f64,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<SeriesValue> {
    if !(zeta >= 0.0) {
        return Err(Error::Precondition(format!("zeta must be nonnegative, got {zeta}")));
    }
    let v = check_height(v0, params)?;
    let mut series = ResidueSeries::new(v);
    series.ensure(settings.max_series_terms.saturating_sub(1).min(64));
    match eval_residue(&series, zeta / params.compton_length(), settings) {
        Err(Error::SeriesNotConverged { .. }) if settings.max_series_terms > 65 => {
            series.ensure(settings.max_series_terms - 1);
            eval_residue(&series, zeta / params.compton_length(), settings)
        }
        other => other,
    }
}

/// `F_B(v0, ζ)` from the contour integral collapsed onto its branch cut.
///
/// For a well (`v0 < 0`) the cut lies on the imaginary momentum axis up to
/// κ_c and the result is an oscillatory integral; for a barrier (`v0 > 0`) it
/// lies on the real axis and the integrand is hyperbolic. Both are written in
/// `k = κ sinθ` form with cancellation-free radicands.
pub fn fb_contour(
    v0: f64,
    zeta: f64,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if !(zeta >= 0.0) {
        return Err(Error::Precondition(format!("zeta must be nonnegative, got {zeta}")));
    }
    let v = check_height(v0, params)?;
    fb_contour_scaled(v, zeta / params.compton_length(), settings)
}

fn fb_contour_scaled(v: f64, zeta_hat: f64, settings: &QuadratureSettings) -> Result<Estimate> {
    if v == 0.0 {
        return Ok(Estimate::new(1.0, 0.0));
    }
    let h = v.abs();
    let pieces = |phase: f64| ((phase / PI).ceil() as usize).clamp(1, 4096);
    let result = if v < 0.0 {
        let kappa = (h * (2.0 + h)).sqrt();
        let e_kappa = 1.0 + h;
        let n = pieces(zeta_hat * kappa);
        let pts: Vec<f64> = (0..=n).map(|i| FRAC_PI_2 * i as f64 / n as f64).collect();
        integrate(
            |t: f64| {
                let k = kappa * t.sin();
                let e = (1.0 + k * k).sqrt();
                (zeta_hat * k).cos() * e / (1.0 - 2.0 * h / (e + e_kappa)).sqrt()
            },
            &pts,
            settings,
        )?
    } else {
        let s0 = 1.0 - h;
        let y0 = (h * (2.0 - h)).sqrt();
        integrate(
            |t: f64| {
                let x = y0 * t.sin();
                let s = (1.0 - x * x).sqrt();
                (zeta_hat * x).cosh() * s / (1.0 + 2.0 * h / (s + s0)).sqrt()
            },
            &[0.0, FRAC_PI_2],
            settings,
        )?
    };
    Ok(result.scale(2.0 / PI))
}

/// Barrier factor `T_B(v0, ·)` for a fixed height, reusable across ζ.
///
/// The residue part uses the power series while it converges without
/// significant cancellation and the collapsed contour integral otherwise
/// (large `κζ`, where the alternating series loses all precision in f64).
#[derive(Debug, Clone)]
pub struct BarrierFactor {
    v: f64,
    scale: f64,
    series: ResidueSeries,
    settings: QuadratureSettings,
}

/// Series rows precomputed for [`BarrierFactor`].
const BARRIER_SERIES_ROWS: usize = 96;

impl BarrierFactor {
    pub fn new(v0: f64, params: &PhysicalParams, settings: &QuadratureSettings) -> Result<Self> {
        let v = check_height(v0, params)?;
        let mut series = ResidueSeries::new(v);
        series.ensure(BARRIER_SERIES_ROWS.min(settings.max_series_terms).saturating_sub(1));
        Ok(Self {
            v,
            scale: 1.0 / params.compton_length(),
            series,
            settings: *settings,
        })
    }

    /// Residue part `F_B` and its error estimate at scaled separation.
    pub fn residue_part(&self, zeta_hat: f64) -> Result<Estimate> {
        if self.v == 0.0 {
            return Ok(Estimate::new(1.0, 0.0));
        }
        let limit = 0.01 * self.settings.rel_tol;
        match eval_residue(&self.series, zeta_hat, &self.settings) {
            Ok(s) => {
                let rounding = 16.0 * f64::EPSILON * s.max_term * s.terms_used as f64;
                if rounding <= limit * s.value.abs().max(1.0) {
                    return Ok(Estimate::new(s.value, rounding));
                }
            }
            Err(Error::Divergence { .. }) | Err(Error::SeriesNotConverged { .. }) => {}
            Err(e) => return Err(e),
        }
        fb_contour_scaled(self.v, zeta_hat, &self.settings)
    }

    /// Branch-cut part `(2/π)∫_1^∞ e^(−ζz) √(z²−1)/z G_B dz` at scaled
    /// separation.
    pub fn branch_part(&self, zeta_hat: f64) -> Result<Estimate> {
        let v = self.v;
        branch_term(zeta_hat, |z| gb_scaled(v, z), &self.settings)
    }

    pub fn eval(&self, zeta: f64) -> Result<KernelEval> {
        check_zeta(zeta)?;
        let zh = zeta * self.scale;
        let r = self.residue_part(zh)?;
        let b = self.branch_part(zh)?;
        Ok(KernelEval {
            zeta,
            value: r.value + b.value,
            err: r.err + b.err,
        })
    }
}

/// Barrier factor `T_B(v0, ζ) = F_B + branch term`. Pass `−V` for the
/// factor that governs crossing the barrier from the left.
pub fn barrier_factor(
    v0: f64,
    zeta: f64,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<KernelEval> {
    BarrierFactor::new(v0, params, settings)?.eval(zeta)
}

/// Region kernel `T̃(η, ζ)` for the square barrier.
pub fn region_kernel(
    region: Region,
    eta: f64,
    zeta: f64,
    barrier: &BarrierSpec,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<KernelEval> {
    let tf = free_factor(zeta, params, settings)?;
    let (value, err) = match region {
        Region::I => (0.5 * eta * tf.value, 0.5 * eta.abs() * tf.err),
        Region::II => {
            // distance from the right edge to the arrival point is −b
            let d = -barrier.b;
            let tb = barrier_factor(barrier.v0, zeta, params, settings)?;
            (
                0.5 * (eta + d) * tf.value - 0.5 * d * tb.value,
                0.5 * (eta + d).abs() * tf.err + 0.5 * d * tb.err,
            )
        }
        Region::III => {
            let l = barrier.length();
            let tb = barrier_factor(-barrier.v0, zeta, params, settings)?;
            (
                0.5 * (eta + l) * tf.value - 0.5 * l * tb.value,
                0.5 * (eta + l).abs() * tf.err + 0.5 * l * tb.err,
            )
        }
    };
    Ok(KernelEval { zeta, value, err })
}

/// Pole contribution `f_{j,k}(ζ)` to the momentum-space kernel expansion:
///
/// `f_{j,k} = (−1)^j Σ_{a=0}^{j} (−1)^a C((k+1)/2, a) ζ^(2j−2a) / ((2j−2a)! ħ^(2j−2a) (μc)^(2a))`
pub fn momentum_kernel_f(j: usize, k: usize, zeta: f64, params: &PhysicalParams) -> f64 {
    let alpha = 0.5 * (k as f64 + 1.0);
    let x = zeta / params.hbar;
    let inv_mc2 = 1.0 / (params.mc() * params.mc());
    let mut sum = 0.0;
    for a in 0..=j {
        let r = j - a;
        let mut p = 1.0;
        for i in 1..=2 * r {
            p *= x / i as f64;
        }
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * gen_binomial(alpha, a) * p * inv_mc2.powi(a as i32);
    }
    if j.is_multiple_of(2) {
        sum
    } else {
        -sum
    }
}

/// Branch-cut contribution `g_{j,k}(ζ)`; zero for odd `k`.
pub fn momentum_kernel_g(
    j: usize,
    k: usize,
    zeta: f64,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if !(zeta != 0.0 && zeta.is_finite()) {
        return Err(Error::Precondition(format!("zeta must be nonzero, got {zeta}")));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let power = 0.5 * (k as f64 + 1.0);
    let est = integrate_semiinf_exp(
        |y: f64| (y * y - 1.0).powf(power) / y.powi(2 * j as i32 + 1),
        1.0,
        zeta.abs() / params.compton_length(),
        settings,
    )?;
    let sign = if (j + k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (2.0 / PI) * est.value / params.mc().powi(2 * j as i32))
}
