//! Globally adaptive Gauss-Kronrod (10/21 point) quadrature and the
//! semi-infinite / endpoint-singular variants built on top of it.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{compensated_sum, Estimate, QuadratureSettings};
use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525478218,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    resabs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resabs = fc.abs() * WGK[10];
    let mut resg = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let resabs = resabs * h;
    let resasc = resasc * h;
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Segment {
        a,
        b,
        value: resk * half,
        err,
        resabs,
    }
}

/// Adaptive integration over `[points[0], points[last]]`, with the interior
/// points used as initial breakpoints.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if points.len() < 2 {
        return Err(Error::Precondition("need at least two points".into()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Precondition("integration limits must be finite".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment> = Vec::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let s = gk21(&f, w[0], w[1]);
        total += s.value;
        total_err += s.err;
        heap.push(s);
    }
    let mut segments = heap.len();
    loop {
        if total_err <= settings.target(total) || !total_err.is_finite() {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let tiny = (worst.b - worst.a).abs() <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        let at_roundoff = worst.err <= 50.0 * f64::EPSILON * worst.resabs;
        if tiny || at_roundoff || mid == worst.a || mid == worst.b {
            done.push(worst);
            continue;
        }
        if segments >= settings.max_subdivisions {
            heap.push(worst);
            return Err(Error::ToleranceNotMet {
                what: "adaptive quadrature",
                value: total,
                err: total_err,
            });
        }
        let l = gk21(&f, worst.a, mid);
        let r = gk21(&f, mid, worst.b);
        total += l.value + r.value - worst.value;
        total_err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
        segments += 1;
    }
    let mut all: Vec<Segment> = heap.into_vec();
    all.extend(done);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = compensated_sum(all.iter().map(|s| s.value));
    let err = compensated_sum(all.iter().map(|s| s.err));
    if !value.is_finite() {
        return Err(Error::ToleranceNotMet {
            what: "adaptive quadrature",
            value,
            err,
        });
    }
    Ok(Estimate::new(value, err))
}

/// `∫_lower^∞ f(z) dz` through `z = lower + scale·t/(1−t)`. `hints` are
/// points beyond `lower` where the integrand has structure.
pub fn integrate_semiinf<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    scale: f64,
    hints: &[f64],
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Precondition(format!("scale must be positive, got {scale}")));
    }
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let om = 1.0 - t;
        let z = lower + scale * t / om;
        let v = f(z);
        if v == 0.0 {
            0.0
        } else {
            v * scale / (om * om)
        }
    };
    let mut pts = vec![0.0];
    let mut ts: Vec<f64> = hints
        .iter()
        .filter(|h| h.is_finite() && **h > lower)
        .map(|h| (h - lower) / (scale + h - lower))
        .collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    pts.extend(ts);
    pts.push(1.0);
    integrate(g, &pts, settings)
}

/// `∫_lower^∞ f(z) e^(−decay·z) dz`.
pub fn integrate_semiinf_exp<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    decay: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    if !(decay > 0.0) {
        return Err(Error::Precondition(format!("decay must be positive, got {decay}")));
    }
    let front = (-decay * lower).exp();
    if front == 0.0 {
        return Ok(Estimate::new(0.0, 0.0));
    }
    let est = integrate_semiinf(
        |x| {
            let w = (-decay * x).exp();
            if w == 0.0 {
                0.0
            } else {
                f(lower + x) * w
            }
        },
        0.0,
        1.0 / decay,
        &[],
        settings,
    )?;
    Ok(est.scale(front))
}

/// `∫_lower^∞ f(z) dz` for integrands with slow algebraic decay. The range is
/// cut where |f| drops below `abs_tol` (dyadic search) and the remaining
/// `1/z` tail is removed by Richardson extrapolation between the last two
/// cutoffs.
pub fn integrate_semiinf_algebraic<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    let floor = settings.abs_tol.max(f64::EPSILON * 1e-2);
    let start = lower.abs().max(1.0);
    let mut edges = vec![lower, lower + start];
    let mut partials = Vec::new();
    let mut acc = 0.0;
    let mut acc_err = 0.0;
    let panel = |a: f64, b: f64| integrate(&f, &[a, b], settings);
    for i in 0..200 {
        let (a, b) = (edges[i], edges[i + 1]);
        let est = panel(a, b)?;
        acc += est.value;
        acc_err += est.err;
        partials.push(acc);
        if f(b).abs() < floor && i >= 2 {
            let n = partials.len();
            let (i1, i2) = (partials[n - 2], partials[n - 1]);
            // cutoffs b/2 and b: remainder ~ C/z, so I ≈ 2·I(b) − I(b/2)
            let h1 = edges[i] - lower;
            let h2 = b - lower;
            let value = (h2 * i2 - h1 * i1) / (h2 - h1);
            return Ok(Estimate::new(value, acc_err + (value - i2).abs() * 1e-3));
        }
        edges.push(lower + 2.0 * (b - lower));
    }
    Err(Error::ToleranceNotMet {
        what: "algebraic tail",
        value: acc,
        err: acc_err,
    })
}

/// `∫_a^∞ f(k) dk` where `f` has an inverse-square-root singularity at `a`,
/// through `k = a + u²`. `hints` are points `k > a` with integrand structure
/// (a narrow peak, for example).
pub fn integrate_sqrt_endpoint<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    hints: &[f64],
    settings: &QuadratureSettings,
) -> Result<Estimate> {
    let g = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let v = f(a + u * u);
        if v == 0.0 {
            0.0
        } else {
            2.0 * u * v
        }
    };
    // g stays bounded at u = 0 for an inverse-square-root singularity and
    // grows like 1/u^(2p-1) for a stronger (k-a)^(-p) one
    let probe = 1e-4 * a.abs().max(1.0).sqrt();
    let (g_near, g_far) = (g(probe).abs(), g(100.0 * probe).abs());
    if !g_near.is_finite() || (g_far > 0.0 && g_near > 10.0 * g_far) {
        return Err(Error::StrongSingularity(a));
    }
    let us: Vec<f64> = hints
        .iter()
        .filter(|h| h.is_finite() && **h > a)
        .map(|h| (h - a).sqrt())
        .collect();
    let scale = us.iter().cloned().fold(0.0, f64::max).max(1.0);
    integrate_semiinf(g, 0.0, scale, &us, settings).map_err(|e| match e {
        Error::ToleranceNotMet { .. } if g_near > 2.0 * g_far => Error::StrongSingularity(a),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, PI};

    fn s() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    #[test]
    fn polynomial_exact() {
        let est = integrate(|x| x * x * x - x, &[0.0, 2.0], &s()).unwrap();
        assert_relative_eq!(est.value, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn endpoint_log_singularity() {
        let est = integrate(|x: f64| x.ln(), &[0.0, 1.0], &s()).unwrap();
        assert_relative_eq!(est.value, -1.0, epsilon = 1e-10);
    }

    #[test]
    fn exp_weight_examples() {
        let st = s();
        let v = integrate_semiinf_exp(|_| 1.0, 1.0, 1.0, &st).unwrap();
        assert_relative_eq!(v.value, 1.0 / E, max_relative = 1e-12);
        let v = integrate_semiinf_exp(|_| 1.0, 0.0, 2.0, &st).unwrap();
        assert_relative_eq!(v.value, 0.5, max_relative = 1e-12);
        let v = integrate_semiinf_exp(|z: f64| (z * z - 1.0).sqrt() / z, 1.0, 1.0, &st).unwrap();
        assert_relative_eq!(v.value, 0.27362075202611622, max_relative = 1e-11);
    }

    #[test]
    fn exp_weight_moments() {
        let st = s();
        for (n, fact) in [(0, 1.0), (1, 1.0), (2, 2.0)] {
            for decay in [0.5, 3.0] {
                let v = integrate_semiinf_exp(|z: f64| z.powi(n), 0.0, decay, &st).unwrap();
                assert_relative_eq!(v.value, fact / decay.powi(n + 1), max_relative = 1e-10);
            }
        }
        // shifted lower limit: ∫_2^∞ z e^{-z} = 3 e^{-2}
        let v = integrate_semiinf_exp(|z| z, 2.0, 1.0, &st).unwrap();
        assert_relative_eq!(v.value, 3.0 * (-2.0f64).exp(), max_relative = 1e-10);
    }

    #[test]
    fn sqrt_endpoint_gamma_integrals() {
        let st = s();
        let v = integrate_sqrt_endpoint(|k: f64| (-k).exp() / (k - 1.0).sqrt(), 1.0, &[], &st).unwrap();
        assert_relative_eq!(v.value, PI.sqrt() / E, max_relative = 1e-10);
        let v = integrate_sqrt_endpoint(|k: f64| (-k).exp() / k.sqrt(), 0.0, &[], &st).unwrap();
        assert_relative_eq!(v.value, PI.sqrt(), max_relative = 1e-10);
        let v = integrate_sqrt_endpoint(|k: f64| (-2.0 * k).exp() / (k - 2.0).sqrt(), 2.0, &[], &st)
            .unwrap();
        assert_relative_eq!(v.value, (-4.0f64).exp() * (PI / 2.0).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn sqrt_endpoint_rejects_pole() {
        let r = integrate_sqrt_endpoint(|k: f64| (-k).exp() / (k - 1.0), 1.0, &[], &s());
        assert!(matches!(r, Err(Error::StrongSingularity(_))));
    }

    #[test]
    fn narrow_peak_found_with_hint() {
        let peak = |k: f64| (-2.0 * 81.0 * (k - 30.0).powi(2)).exp() / (k - 1.0).sqrt();
        let v = integrate_sqrt_endpoint(peak, 1.0, &[29.5, 30.0, 30.5], &s()).unwrap();
        let expect = (PI / 162.0).sqrt() / 29f64.sqrt();
        assert_relative_eq!(v.value, expect, max_relative = 1e-5);
    }

    #[test]
    fn algebraic_tail() {
        let v = integrate_semiinf_algebraic(|z| 1.0 / (1.0 + z * z), 0.0, &s()).unwrap();
        assert_relative_eq!(v.value, PI / 2.0, max_relative = 1e-9);
    }

    #[test]
    fn exhausted_subdivisions_is_an_error() {
        let st = QuadratureSettings { max_subdivisions: 3, ..s() };
        let r = integrate(|x: f64| (1.0 / x).sin(), &[1e-6, 1.0], &st);
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
    }
}
