//! Incident states: momentum densities and the two-point overlap Φ(ζ).

use crate::error::{Error, Result};
use crate::kernels::BarrierSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// What the expectation-value machinery needs from an incident state.
pub trait Packet: Sync {
    /// `Φ(ζ) = ∫ φ*(η−ζ/2) φ(η+ζ/2) dη` of the envelope, with `Φ(0) = 1`.
    fn overlap(&self, zeta: f64) -> f64;
    /// `|ψ̃(±k)|²` for `k ≥ 0`.
    fn momentum_density(&self, k: f64, sign: Sign) -> f64;
    /// Carrier wavenumber `k0`.
    fn carrier(&self) -> f64;
    /// Width of the momentum density.
    fn momentum_spread(&self) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub q0: f64,
    pub sigma: f64,
    pub k0: f64,
}

impl GaussianPacket {
    pub fn new(q0: f64, sigma: f64, k0: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
        }
        if !(k0 > 0.0 && k0.is_finite()) {
            return Err(Error::InvalidParameter(format!("k0 must be positive, got {k0}")));
        }
        if !q0.is_finite() {
            return Err(Error::InvalidParameter(format!("q0 must be finite, got {q0}")));
        }
        Ok(Self { q0, sigma, k0 })
    }

    /// `σ_k = 1/(2σ)`.
    pub fn sigma_k(&self) -> f64 {
        0.5 / self.sigma
    }

    /// True when the packet starts inside the barrier or closer than five
    /// widths to its left edge.
    pub fn leaks_into(&self, barrier: &BarrierSpec) -> bool {
        !(self.q0 < barrier.a && (barrier.a - self.q0) > 5.0 * self.sigma)
    }
}

impl Packet for GaussianPacket {
    fn overlap(&self, zeta: f64) -> f64 {
        phi_overlap(self, zeta)
    }

    fn momentum_density(&self, k: f64, sign: Sign) -> f64 {
        momentum_density(self, k, sign)
    }

    fn carrier(&self) -> f64 {
        self.k0
    }

    fn momentum_spread(&self) -> f64 {
        self.sigma_k()
    }
}

/// `|ψ̃(±k)|² = √(2σ²/π) exp(−2σ²(k ∓ k0)²)`.
pub fn momentum_density(packet: &GaussianPacket, k: f64, sign: Sign) -> f64 {
    let s2 = packet.sigma * packet.sigma;
    let d = k - sign.factor() * packet.k0;
    (2.0 * s2 / std::f64::consts::PI).sqrt() * (-2.0 * s2 * d * d).exp()
}

/// `Φ(ζ) = exp(−ζ²/(8σ²))`.
pub fn phi_overlap(packet: &GaussianPacket, zeta: f64) -> f64 {
    (-zeta * zeta / (8.0 * packet.sigma * packet.sigma)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::PhysicalParams;
    use crate::numerics::{integrate_semiinf, QuadratureSettings};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn envelope(p: &GaussianPacket, x: f64) -> f64 {
        (2.0 * PI * p.sigma * p.sigma).powf(-0.25) * (-(x * x) / (4.0 * p.sigma * p.sigma)).exp()
    }

    #[test]
    fn density_values() {
        let p = GaussianPacket::new(-10.0, 0.5, 2.0).unwrap();
        assert_relative_eq!(momentum_density(&p, 2.0, Sign::Plus), (1.0 / (2.0 * PI)).sqrt(), max_relative = 1e-15);
        let ratio = momentum_density(&p, 2.0, Sign::Plus) / momentum_density(&p, 2.0, Sign::Minus);
        assert_relative_eq!(ratio, (8.0f64 * 0.25 * 4.0).exp(), max_relative = 1e-12);
    }

    #[test]
    fn density_normalized() {
        let p = GaussianPacket::new(-10.0, 0.5, 2.0).unwrap();
        let st = QuadratureSettings::default();
        let f = |k: f64| momentum_density(&p, k, Sign::Plus);
        let right = integrate_semiinf(f, 0.0, 1.0, &[2.0], &st).unwrap().value;
        let left = integrate_semiinf(|k| f(-k), 0.0, 1.0, &[], &st).unwrap().value;
        assert_relative_eq!(right + left, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn overlap_closed_form() {
        let p = GaussianPacket::new(-10.0, 0.5, 2.0).unwrap();
        assert_eq!(phi_overlap(&p, 0.0), 1.0);
        assert_relative_eq!(phi_overlap(&p, 2.0 * 0.5 * 2f64.sqrt()), (-1.0f64).exp(), max_relative = 1e-15);
        let st = QuadratureSettings::default();
        for z in [0.5, 1.0, 5.0] {
            let f = |x: f64| envelope(&p, x - z / 2.0) * envelope(&p, x + z / 2.0);
            let half = integrate_semiinf(f, 0.0, 1.0, &[], &st).unwrap().value;
            assert_relative_eq!(2.0 * half, phi_overlap(&p, z), epsilon = 1e-10);
        }
    }

    #[test]
    fn leak_threshold() {
        let params = PhysicalParams::default();
        let bar = BarrierSpec::new(0.3, -2.0, -1.0, &params).unwrap();
        assert!(!GaussianPacket::new(-10.0, 0.5, 2.0).unwrap().leaks_into(&bar));
        assert!(GaussianPacket::new(-3.0, 0.5, 2.0).unwrap().leaks_into(&bar));
        assert!(GaussianPacket::new(-1.5, 0.1, 2.0).unwrap().leaks_into(&bar));
    }

    #[test]
    fn rejects_bad_packets() {
        assert!(GaussianPacket::new(-1.0, 0.0, 1.0).is_err());
        assert!(GaussianPacket::new(-1.0, 1.0, -1.0).is_err());
    }
}
