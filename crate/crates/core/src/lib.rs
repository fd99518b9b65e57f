//! Canonical proper-time electrodynamics and relativistic mechanics.
//!
//! The library works with two clocks: the observer's `t` and the source's
//! proper time `τ`. Velocities measured against the source clock are proper
//! velocities `u = dx/dτ`, and the speed of light seen along that clock is the
//! collaborative speed `b = sqrt(c² + u²)`.
//!
//! Modules:
//!
//! * [`units`]: dual-clock kinematics and the unit system.
//! * [`group`]: the proper-time group, which fixes `τ` for all observers.
//! * [`fields`]: retarded `E` and `B` fields of a point charge, the
//!   dissipative wave-equation coefficient and the effective photon mass.
//! * [`dynamics`]: the single-particle canonical Hamiltonian `K` and its flow.
//! * [`many_body`]: the global-clock many-particle theory.
//! * [`spectral`]: the nonlocal square-root operator and its kernel.

pub mod bessel;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod group;
pub mod many_body;
pub mod potential;
pub mod quadrature;
pub mod spectral;
pub mod trajectory;
pub mod units;

/// Cartesian 3-vector used throughout the crate.
pub type Vec3 = nalgebra::Vector3<f64>;

pub use error::{Error, Result};
pub use units::UnitSystem;

/// Version of this crate.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
