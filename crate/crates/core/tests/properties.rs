//! Property-based invariants.

use proptest::prelude::*;

use reltoa::classical::{classical_toa_closed, crtoa_quadrature, kappa_c};
use reltoa::ior::ior_momentum;
use reltoa::kernels::{barrier_factor, free_factor, gb_factor, region_kernel, BarrierSpec, PhysicalParams, Region};
use reltoa::numerics::{sine_transform_decaying, QuadratureSettings};
use reltoa::wavepacket::{momentum_density, phi_overlap, GaussianPacket, Sign};

fn st() -> QuadratureSettings {
    QuadratureSettings::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gb_even_in_barrier_height(v in 0.01f64..0.95, z in 1.0f64..50.0) {
        let p = PhysicalParams::default();
        let a = gb_factor(v, z, &p).unwrap();
        let b = gb_factor(-v, z, &p).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));
    }

    #[test]
    fn sine_transform_is_linear(k in 0.5f64..4.0, s1 in 0.5f64..3.0, s2 in 0.5f64..3.0, alpha in -2.0f64..2.0) {
        let f = |x: f64| (-x * x / (s1 * s1)).exp();
        let g = |x: f64| (-x / s2).exp();
        let a = sine_transform_decaying(f, k, &st()).unwrap().value;
        let b = sine_transform_decaying(g, k, &st()).unwrap().value;
        let c = sine_transform_decaying(|x| f(x) + alpha * g(x), k, &st()).unwrap().value;
        prop_assert!((c - (a + alpha * b)).abs() < 1e-9);
    }

    #[test]
    fn kernels_are_deterministic(v in 0.01f64..0.95, zeta in 0.05f64..20.0) {
        let p = PhysicalParams::default();
        let a = barrier_factor(-v, zeta, &p, &st()).unwrap();
        let b = barrier_factor(-v, zeta, &p, &st()).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(free_factor(zeta, &p, &st()).unwrap(), free_factor(zeta, &p, &st()).unwrap());
    }

    #[test]
    fn region_kernel_is_affine_in_eta(v in 0.05f64..0.9, zeta in 0.1f64..5.0, e1 in -5.0f64..5.0, e2 in -5.0f64..5.0) {
        let p = PhysicalParams::default();
        let bar = BarrierSpec::new(v, -2.0, -1.0, &p).unwrap();
        let tf = free_factor(zeta, &p, &st()).unwrap().value;
        for region in [Region::I, Region::II, Region::III] {
            let a = region_kernel(region, e1, zeta, &bar, &p, &st()).unwrap().value;
            let b = region_kernel(region, e2, zeta, &bar, &p, &st()).unwrap().value;
            prop_assert!((a - b - 0.5 * (e1 - e2) * tf).abs() <= 1e-12 * (1.0 + a.abs() + b.abs()));
        }
    }

    #[test]
    fn overlap_and_density_properties(sigma in 0.2f64..10.0, k0 in 0.05f64..5.0, z in 0.0f64..30.0, dk in 0.0f64..2.0) {
        let pk = GaussianPacket::new(-100.0, sigma, k0).unwrap();
        prop_assert_eq!(phi_overlap(&pk, 0.0), 1.0);
        prop_assert!(phi_overlap(&pk, z) <= 1.0 && phi_overlap(&pk, z) >= 0.0);
        prop_assert_eq!(phi_overlap(&pk, z), phi_overlap(&pk, -z));
        let hi = momentum_density(&pk, k0 + dk, Sign::Plus);
        let lo = momentum_density(&pk, k0 - dk, Sign::Plus);
        prop_assert!((hi - lo).abs() <= 1e-9 * hi.max(lo));
        prop_assert!(phi_overlap(&pk, z + 0.5) < phi_overlap(&pk, z) || phi_overlap(&pk, z) == 0.0);
        prop_assert!(momentum_density(&pk, k0, Sign::Minus) <= momentum_density(&pk, k0, Sign::Plus));
    }

    #[test]
    fn momentum_route_splits_into_parts(v in 0.05f64..0.95, sigma in 0.5f64..8.0, k0 in 0.1f64..5.0) {
        let p = PhysicalParams::default();
        let pk = GaussianPacket::new(-100.0, sigma, k0).unwrap();
        let r = ior_momentum(&pk, v, &p, &st()).unwrap();
        let (plus, minus) = (r.plus_part.unwrap(), r.minus_part.unwrap());
        prop_assert!(plus >= 0.0 && minus >= 0.0);
        prop_assert_eq!(r.value, plus - minus);
    }

    #[test]
    fn classical_region_one_closed_form(v in 0.05f64..0.9, b in -3.0f64..-0.1, len in 0.1f64..3.0, frac in 0.0f64..1.0, p0 in 0.1f64..5.0) {
        let p = PhysicalParams::default();
        let bar = BarrierSpec::new(v, b - len, b, &p).unwrap();
        let q0 = b * frac;
        let quad = crtoa_quadrature(q0, p0, &bar, &p).unwrap();
        let closed = classical_toa_closed(Region::I, q0, p0, &bar, &p).unwrap();
        prop_assert!((quad - closed).abs() <= 1e-12 * closed.abs().max(1e-12));
    }

    #[test]
    fn threshold_identity_holds(v in 0.0f64..0.999) {
        let p = PhysicalParams::default();
        let k = kappa_c(v, &p).unwrap();
        let rhs = (1.0 + v) * (1.0 + v);
        prop_assert!((k * k + 1.0 - rhs).abs() <= 4.0 * f64::EPSILON * rhs);
    }
}
