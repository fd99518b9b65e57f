//! Charge worldlines parametrised by the source proper time.

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::units::UnitSystem;
use crate::Vec3;

/// A point charge moving along `x̄(τ)`.
///
/// Implementors are immutable; field evaluation only reads them, so one
/// trajectory can serve many threads at once.
pub trait SourceTrajectory: Send + Sync {
    /// Charge in Gaussian units.
    fn charge(&self) -> f64;

    /// Proper-time interval on which the worldline is defined.
    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn position(&self, tau: f64) -> Vec3;

    /// `u = dx̄/dτ`.
    fn velocity(&self, tau: f64) -> Vec3;

    /// `a = du/dτ`.
    fn acceleration(&self, tau: f64) -> Vec3;

    /// `da/dτ`, when the trajectory knows it.
    fn jerk(&self, _tau: f64) -> Option<Vec3> {
        None
    }

    /// `∫_{from}^{to} b(s) ds` with `b = sqrt(c² + u²)`.
    fn lightspeed_integral(&self, from: f64, to: f64, units: &UnitSystem) -> f64 {
        let c = units.c();
        let scale = c * (to - from).abs();
        adaptive_simpson(
            &|s: f64| c.hypot(self.velocity(s).norm()),
            from,
            to,
            1e-15 * scale.max(f64::MIN_POSITIVE),
        )
    }
}

/// A charge at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticCharge {
    pub charge: f64,
    pub position: Vec3,
}

impl SourceTrajectory for StaticCharge {
    fn charge(&self) -> f64 {
        self.charge
    }
    fn position(&self, _tau: f64) -> Vec3 {
        self.position
    }
    fn velocity(&self, _tau: f64) -> Vec3 {
        Vec3::zeros()
    }
    fn acceleration(&self, _tau: f64) -> Vec3 {
        Vec3::zeros()
    }
    fn jerk(&self, _tau: f64) -> Option<Vec3> {
        Some(Vec3::zeros())
    }
    fn lightspeed_integral(&self, from: f64, to: f64, units: &UnitSystem) -> f64 {
        units.c() * (to - from)
    }
}

/// Constant proper velocity: `x̄(τ) = x₀ + u τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformMotion {
    pub charge: f64,
    pub origin: Vec3,
    pub velocity: Vec3,
}

impl SourceTrajectory for UniformMotion {
    fn charge(&self) -> f64 {
        self.charge
    }
    fn position(&self, tau: f64) -> Vec3 {
        self.origin + self.velocity * tau
    }
    fn velocity(&self, _tau: f64) -> Vec3 {
        self.velocity
    }
    fn acceleration(&self, _tau: f64) -> Vec3 {
        Vec3::zeros()
    }
    fn jerk(&self, _tau: f64) -> Option<Vec3> {
        Some(Vec3::zeros())
    }
    fn lightspeed_integral(&self, from: f64, to: f64, units: &UnitSystem) -> f64 {
        units.collaborative_speed(&self.velocity) * (to - from)
    }
}

/// Constant proper acceleration: `u(τ) = u₀ + a τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformAcceleration {
    pub charge: f64,
    pub origin: Vec3,
    pub initial_velocity: Vec3,
    pub acceleration: Vec3,
}

impl SourceTrajectory for UniformAcceleration {
    fn charge(&self) -> f64 {
        self.charge
    }
    fn position(&self, tau: f64) -> Vec3 {
        self.origin + self.initial_velocity * tau + self.acceleration * (0.5 * tau * tau)
    }
    fn velocity(&self, tau: f64) -> Vec3 {
        self.initial_velocity + self.acceleration * tau
    }
    fn acceleration(&self, _tau: f64) -> Vec3 {
        self.acceleration
    }
    fn jerk(&self, _tau: f64) -> Option<Vec3> {
        Some(Vec3::zeros())
    }
    fn lightspeed_integral(&self, from: f64, to: f64, units: &UnitSystem) -> f64 {
        // b² = A(s + β)² + D, integrated in closed form.
        let big_a = self.acceleration.norm_squared();
        if big_a == 0.0 {
            return units.collaborative_speed(&self.initial_velocity) * (to - from);
        }
        let c = units.c();
        let beta = self.initial_velocity.dot(&self.acceleration) / big_a;
        let d = c * c
            + self
                .initial_velocity
                .cross(&self.acceleration)
                .norm_squared()
                / big_a;
        let (sa, sd) = (big_a.sqrt(), d.sqrt());
        let antiderivative =
            |y: f64| 0.5 * y * (big_a * y * y + d).sqrt() + d / (2.0 * sa) * (sa * y / sd).asinh();
        antiderivative(to + beta) - antiderivative(from + beta)
    }
}

/// Circular motion in the plane `z = center.z` with constant proper speed
/// `radius·ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularMotion {
    pub charge: f64,
    pub center: Vec3,
    pub radius: f64,
    pub omega: f64,
}

impl SourceTrajectory for CircularMotion {
    fn charge(&self) -> f64 {
        self.charge
    }
    fn position(&self, tau: f64) -> Vec3 {
        let (s, c) = (self.omega * tau).sin_cos();
        self.center + Vec3::new(c, s, 0.0) * self.radius
    }
    fn velocity(&self, tau: f64) -> Vec3 {
        let (s, c) = (self.omega * tau).sin_cos();
        Vec3::new(-s, c, 0.0) * (self.radius * self.omega)
    }
    fn acceleration(&self, tau: f64) -> Vec3 {
        let (s, c) = (self.omega * tau).sin_cos();
        Vec3::new(c, s, 0.0) * (-self.radius * self.omega * self.omega)
    }
    fn jerk(&self, tau: f64) -> Option<Vec3> {
        let (s, c) = (self.omega * tau).sin_cos();
        Some(Vec3::new(s, -c, 0.0) * (self.radius * self.omega.powi(3)))
    }
    fn lightspeed_integral(&self, from: f64, to: f64, units: &UnitSystem) -> f64 {
        units.c().hypot(self.radius * self.omega) * (to - from)
    }
}

/// A worldline known only at sample points, interpolated by a natural cubic
/// spline per component. `u` and `a` are the spline's first and second
/// derivatives.
#[derive(Debug, Clone)]
pub struct SampledTrajectory {
    charge: f64,
    tau: Vec<f64>,
    positions: Vec<Vec3>,
    second: Vec<Vec3>,
}

impl SampledTrajectory {
    pub fn new(charge: f64, tau: Vec<f64>, positions: Vec<Vec3>) -> Result<Self> {
        if tau.len() != positions.len() {
            return Err(Error::Grid(format!(
                "{} sample times but {} positions",
                tau.len(),
                positions.len()
            )));
        }
        if tau.len() < 3 {
            return Err(Error::Grid(
                "a sampled trajectory needs at least three samples".into(),
            ));
        }
        if tau.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid(
                "sample times must be strictly increasing".into(),
            ));
        }
        let second = natural_spline_second_derivatives(&tau, &positions);
        Ok(Self {
            charge,
            tau,
            positions,
            second,
        })
    }

    pub fn sample_times(&self) -> &[f64] {
        &self.tau
    }

    fn segment(&self, tau: f64) -> usize {
        let n = self.tau.len();
        match self.tau.partition_point(|&t| t <= tau) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }
}

impl SourceTrajectory for SampledTrajectory {
    fn charge(&self) -> f64 {
        self.charge
    }

    fn domain(&self) -> (f64, f64) {
        (self.tau[0], self.tau[self.tau.len() - 1])
    }

    fn position(&self, tau: f64) -> Vec3 {
        let i = self.segment(tau);
        let h = self.tau[i + 1] - self.tau[i];
        let a = (self.tau[i + 1] - tau) / h;
        let b = (tau - self.tau[i]) / h;
        self.positions[i] * a
            + self.positions[i + 1] * b
            + (self.second[i] * (a * a * a - a) + self.second[i + 1] * (b * b * b - b))
                * (h * h / 6.0)
    }

    fn velocity(&self, tau: f64) -> Vec3 {
        let i = self.segment(tau);
        let h = self.tau[i + 1] - self.tau[i];
        let a = (self.tau[i + 1] - tau) / h;
        let b = (tau - self.tau[i]) / h;
        (self.positions[i + 1] - self.positions[i]) / h
            - self.second[i] * ((3.0 * a * a - 1.0) * h / 6.0)
            + self.second[i + 1] * ((3.0 * b * b - 1.0) * h / 6.0)
    }

    fn acceleration(&self, tau: f64) -> Vec3 {
        let i = self.segment(tau);
        let h = self.tau[i + 1] - self.tau[i];
        let a = (self.tau[i + 1] - tau) / h;
        let b = (tau - self.tau[i]) / h;
        self.second[i] * a + self.second[i + 1] * b
    }

    fn jerk(&self, tau: f64) -> Option<Vec3> {
        let i = self.segment(tau);
        let h = self.tau[i + 1] - self.tau[i];
        Some((self.second[i + 1] - self.second[i]) / h)
    }
}

// Thomas algorithm on the natural-spline system.
fn natural_spline_second_derivatives(tau: &[f64], y: &[Vec3]) -> Vec<Vec3> {
    let n = tau.len();
    let mut m = vec![Vec3::zeros(); n];
    let mut diag = vec![0.0; n];
    let mut rhs = vec![Vec3::zeros(); n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = tau[i] - tau[i - 1];
        let h1 = tau[i + 1] - tau[i];
        let lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        if i > 1 {
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] = rhs[i] - rhs[i - 1] * w;
        }
    }
    for i in (1..n - 1).rev() {
        let next = if i + 1 < n - 1 {
            m[i + 1] * upper[i]
        } else {
            Vec3::zeros()
        };
        m[i] = (rhs[i] - next) / diag[i];
    }
    m
}
