//! Effective index of refraction of a barrier for an incident packet, and
//! the traversal times and arrival-time shifts that follow from it.
//!
//! Three routes to `R̃_c` are provided: a sine transform of the barrier
//! factor against the packet overlap (`direct`), the same transform done
//! term by term on the residue power series (`series`), and an integral over
//! the above-threshold momentum components (`momentum`).

use std::cell::RefCell;
use std::fmt;

use crate::classical::kappa_c;
use crate::error::{Error, Result};
use crate::kernels::{free_factor, BarrierFactor, BarrierSpec, PhysicalParams, ResidueSeries};
use crate::numerics::{integrate_sqrt_endpoint, sine_transform_decaying, Estimate, QuadratureSettings};
use crate::wavepacket::{Packet, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    Series,
    Momentum,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Series => "series",
            Method::Momentum => "momentum",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IorResult {
    pub method: Method,
    pub value: f64,
    /// Above-threshold contribution from right-moving components (momentum
    /// method only).
    pub plus_part: Option<f64>,
    /// Contribution from left-moving components (momentum method only).
    pub minus_part: Option<f64>,
    pub err: f64,
    pub converged: bool,
    /// Series terms summed (series method only).
    pub terms_used: Option<usize>,
}

impl IorResult {
    fn quadrature(method: Method, est: Estimate) -> Self {
        Self {
            method,
            value: est.value,
            plus_part: None,
            minus_part: None,
            err: est.err,
            converged: true,
            terms_used: None,
        }
    }
}

fn scaled_carrier<P: Packet>(packet: &P, params: &PhysicalParams) -> f64 {
    packet.carrier() * params.compton_length()
}

fn check_height(v0: f64, params: &PhysicalParams) -> Result<()> {
    if v0 >= 0.0 && v0 < params.rest_energy() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "barrier height {v0} outside [0, μc²)"
        )))
    }
}

/// `∫_0^∞ sin(k̂0 ζ̂) g(ζ) Φ(ζ) dζ̂` in scaled length, with errors raised
/// inside `g` carried out of the quadrature.
fn overlap_transform<P, G>(packet: &P, params: &PhysicalParams, settings: &QuadratureSettings, g: G) -> Result<Estimate>
where
    P: Packet,
    G: Fn(f64) -> Result<f64>,
{
    let lambda = params.compton_length();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let f = |zh: f64| {
        let zeta = zh * lambda;
        let phi = packet.overlap(zeta);
        if phi == 0.0 {
            return 0.0;
        }
        match g(zeta) {
            Ok(v) => v * phi,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let est = sine_transform_decaying(f, scaled_carrier(packet, params), settings);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    est
}

/// `R̃_c` as the sine transform of `T_B(−V, ζ) Φ(ζ)`.
pub fn ior_direct<P: Packet>(
    packet: &P,
    v0: f64,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<IorResult> {
    check_height(v0, params)?;
    let bf = BarrierFactor::new(-v0, params, settings)?;
    let est = overlap_transform(packet, params, settings, |zeta| Ok(bf.eval(zeta)?.value))?;
    Ok(IorResult::quadrature(Method::Direct, est))
}

/// `R̃_c` by integrating the residue power series term by term against the
/// overlap (Gaussian sine moments), plus the branch-cut part, summing at most
/// `l_max + 1` terms.
pub fn ior_series<P: Packet>(
    packet: &P,
    v0: f64,
    l_max: usize,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<IorResult> {
    check_height(v0, params)?;
    let lambda = params.compton_length();
    let kh = scaled_carrier(packet, params);
    let v = -v0 / params.rest_energy();
    let mut series = ResidueSeries::new(v);

    // even sine moments m[j] = ∫ sin(k̂0ζ) ζ^(2j)/(2j)! Φ dζ
    let mut moments: Vec<f64> = Vec::new();
    let mut moment_err = 0.0;
    let mut moment = |j: usize, moments: &mut Vec<f64>| -> Result<f64> {
        while moments.len() <= j {
            let p = 2 * moments.len();
            let ln_fact = statrs::function::gamma::ln_gamma(p as f64 + 1.0);
            let est = sine_transform_decaying(
                |zh: f64| {
                    let phi = packet.overlap(zh * lambda);
                    if phi == 0.0 {
                        0.0
                    } else {
                        (p as f64 * zh.ln() - ln_fact).exp() * phi
                    }
                },
                kh,
                settings,
            )?;
            moment_err += est.err;
            moments.push(est.value);
        }
        Ok(moments[j])
    };

    let mut sum = 0.0;
    let mut small = 0;
    let mut growing = 0;
    let mut prev = f64::INFINITY;
    let mut converged = false;
    let mut terms = 0;
    for l in 0..=l_max.min(settings.max_series_terms) {
        let row = series.row(l).to_vec();
        let mut t = 0.0;
        for (n, a) in row.iter().enumerate() {
            t += a * moment(l - n, &mut moments)?;
        }
        sum += t;
        terms = l + 1;
        if t.abs() < settings.abs_tol * (1.0 + sum.abs()) {
            small += 1;
            if small >= 3 {
                converged = true;
                break;
            }
        } else {
            small = 0;
        }
        if l > 0 && t.abs() > prev {
            growing += 1;
            if growing >= 5 {
                return Err(Error::Divergence {
                    what: "series index of refraction",
                    terms,
                });
            }
        } else {
            growing = 0;
        }
        prev = t.abs();
    }

    let bf = BarrierFactor::new(-v0, params, settings)?;
    let branch = overlap_transform(packet, params, settings, |zeta| bf_branch(&bf, zeta, lambda))?;
    Ok(IorResult {
        method: Method::Series,
        value: sum + branch.value,
        plus_part: None,
        minus_part: None,
        err: branch.err + moment_err,
        converged,
        terms_used: Some(terms),
    })
}

fn bf_branch(bf: &BarrierFactor, zeta: f64, lambda: f64) -> Result<f64> {
    Ok(bf.branch_part(zeta / lambda)?.value)
}

/// `W(k) = E/√((E−V)²−μ²c⁴)` in scaled variables, written so that it stays
/// accurate as `k → κ_c`.
fn above_threshold_weight(k: f64, kappa: f64, v: f64, lambda: f64) -> f64 {
    let kk = lambda * k;
    let e = (1.0 + kk * kk).sqrt();
    let e_kappa = 1.0 + v;
    let rad = lambda * lambda * (k - kappa) * (k + kappa) / (e + e_kappa) * (e - v + 1.0);
    e / rad.sqrt()
}

/// `R̃_c = R̃⁺ − R̃⁻` with `R̃^± = ∫_κ_c^∞ |ψ̃(±k)|² W(k) dk`.
pub fn ior_momentum<P: Packet>(
    packet: &P,
    v0: f64,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<IorResult> {
    check_height(v0, params)?;
    if v0 == 0.0 {
        // each half-line integral diverges logarithmically at k = 0
        return Err(Error::Precondition("momentum route needs a positive barrier height".into()));
    }
    let kappa = kappa_c(v0, params)?;
    let v = v0 / params.rest_energy();
    let lambda = params.compton_length();
    let st = settings.with_abs_tol(0.0);
    let k0 = packet.carrier();
    let sk = packet.momentum_spread();
    let part = |sign: Sign, hints: &[f64]| {
        integrate_sqrt_endpoint(
            |k| {
                let rho = packet.momentum_density(k, sign);
                if rho == 0.0 {
                    0.0
                } else {
                    rho * above_threshold_weight(k, kappa, v, lambda)
                }
            },
            kappa,
            hints,
            &st,
        )
    };
    let plus_hints: Vec<f64> = [-8.0, -4.0, -2.0, 0.0, 2.0, 4.0, 8.0].iter().map(|n| k0 + n * sk).collect();
    let minus_hints: Vec<f64> = [1.0, 4.0, 16.0].iter().map(|n| kappa + n * sk).collect();
    let plus = part(Sign::Plus, &plus_hints)?;
    let minus = part(Sign::Minus, &minus_hints)?;
    Ok(IorResult {
        method: Method::Momentum,
        value: plus.value - minus.value,
        plus_part: Some(plus.value),
        minus_part: Some(minus.value),
        err: plus.err + minus.err,
        converged: true,
        terms_used: None,
    })
}

/// Free-flight factor `Q̃_c`, the sine transform of `T_F(ζ) Φ(ζ)`. For wide
/// packets `k̂0 Q̃_c → √(1 + p0²/μ²c²)`.
pub fn qc_expectation<P: Packet>(packet: &P, params: &PhysicalParams, settings: &QuadratureSettings) -> Result<f64> {
    let est = overlap_transform(packet, params, settings, |zeta| Ok(free_factor(zeta, params, settings)?.value))?;
    Ok(est.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraversalTime {
    pub tau: f64,
    pub tau_plus: f64,
    pub tau_minus: f64,
}

/// Expected traversal time `t_c R̃_c` and its split, `t_c = L/c`.
pub fn traversal_time<P: Packet>(
    packet: &P,
    barrier: &BarrierSpec,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<TraversalTime> {
    barrier.validate(params)?;
    let r = ior_momentum(packet, barrier.v0, params, settings)?;
    let tc = barrier.length() / params.c;
    Ok(TraversalTime {
        tau: tc * r.value,
        tau_plus: tc * r.plus_part.unwrap_or(r.value),
        tau_minus: tc * r.minus_part.unwrap_or(0.0),
    })
}

/// Shift of the mean arrival time caused by the barrier,
/// `(L/c)(Q̃_c − R̃_c)`, with both factors from the sine-transform route.
pub fn toa_difference<P: Packet>(
    packet: &P,
    barrier: &BarrierSpec,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<f64> {
    barrier.validate(params)?;
    let r = ior_direct(packet, barrier.v0, params, settings)?;
    let q = qc_expectation(packet, params, settings)?;
    Ok(barrier.length() / params.c * (q - r.value))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Luminality {
    Superluminal,
    Subluminal,
}

impl fmt::Display for Luminality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Luminality::Superluminal => "superluminal",
            Luminality::Subluminal => "subluminal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub kind: Luminality,
    pub r_tilde: f64,
    /// `k0 − (κ_c − σ_k)`; negative values are expected to be superluminal.
    pub margin: f64,
}

/// Superluminal when `R̃_c < 1`, i.e. the packet crosses faster than light.
pub fn superluminal_classify<P: Packet>(
    packet: &P,
    v0: f64,
    params: &PhysicalParams,
    settings: &QuadratureSettings,
) -> Result<Classification> {
    let r = ior_momentum(packet, v0, params, settings)?;
    let kappa = kappa_c(v0, params)?;
    let kind = if r.value < 1.0 {
        Luminality::Superluminal
    } else {
        Luminality::Subluminal
    };
    Ok(Classification {
        kind,
        r_tilde: r.value,
        margin: packet.carrier() - (kappa - packet.momentum_spread()),
    })
}
