//! Relativistic time-of-arrival kernels for a spin-0 particle and a square
//! potential barrier, together with the wavepacket expectation values built
//! from them (effective index of refraction, traversal time, TOA shift).
//!
//! All physical inputs are carried in a [`kernels::PhysicalParams`] unit
//! system; natural units (mass, light speed and reduced action all 1) are the
//! default.

// negated comparisons reject NaN inputs
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// quadrature nodes and frozen reference values keep all published digits
#![allow(clippy::excessive_precision)]

pub mod classical;
pub mod cli;
pub mod error;
pub mod ior;
pub mod kernels;
pub mod numerics;
pub mod wavepacket;

pub use error::{Error, Result};
pub use kernels::{BarrierSpec, KernelEval, PhysicalParams, Region};
pub use numerics::{ComplexScalar, Estimate, QuadratureSettings};
pub use wavepacket::{GaussianPacket, Packet, Sign};

