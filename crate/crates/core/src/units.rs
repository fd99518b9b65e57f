//! Dual-clock kinematics.
//!
//! An observer measures the observer velocity `w = dx/dt`; the source clock
//! gives the proper velocity `u = dx/dτ`. The two are tied by the
//! collaborative speed of light `b = sqrt(c² + u²)` through `w / c = u / b`.
//! Proper speeds are unbounded while `|w| < c` always holds.

use crate::error::{Error, Result};
use crate::quadrature;
use crate::Vec3;

/// Speed of light in SI units (m/s).
pub const C_SI: f64 = 299_792_458.0;

/// Charge convention. Only Gaussian (c.g.s.-style) units are supported, so
/// Coulomb's law reads `E = e r / r³` without a `4πε₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChargeConvention {
    #[default]
    Gaussian,
}

/// Unit system shared by every module: a positive speed of light and the
/// charge convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    c: f64,
    charge_convention: ChargeConvention,
}

impl UnitSystem {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!(
                "speed of light must be positive, got {c}"
            )));
        }
        Ok(Self {
            c,
            charge_convention: ChargeConvention::Gaussian,
        })
    }

    /// `c = 1`.
    pub fn natural() -> Self {
        Self {
            c: 1.0,
            charge_convention: ChargeConvention::Gaussian,
        }
    }

    /// `c` in metres per second.
    pub fn si_lightspeed() -> Self {
        Self {
            c: C_SI,
            charge_convention: ChargeConvention::Gaussian,
        }
    }

    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn charge_convention(&self) -> ChargeConvention {
        self.charge_convention
    }

    /// Lorentz factor `1 / sqrt(1 - w²/c²)` of an observer velocity.
    pub fn gamma(&self, w: &Vec3) -> Result<f64> {
        let beta2 = w.norm_squared() / (self.c * self.c);
        if !(beta2 < 1.0) {
            return Err(Error::Domain(format!(
                "|w| = {} must be below c = {}",
                w.norm(),
                self.c
            )));
        }
        Ok(1.0 / (1.0 - beta2).sqrt())
    }

    /// `u = γ(w) w`.
    pub fn proper_from_observer(&self, w: &Vec3) -> Result<Vec3> {
        Ok(w * self.gamma(w)?)
    }

    /// `w = u c / b`. Total for every finite `u`.
    pub fn observer_from_proper(&self, u: &Vec3) -> Vec3 {
        u * (self.c / self.collaborative_speed(u))
    }

    /// `b = sqrt(c² + u·u)`.
    #[inline]
    pub fn collaborative_speed(&self, u: &Vec3) -> f64 {
        self.c.hypot(u.norm())
    }

    /// Observer time elapsed while the source clock advances over the sampled
    /// grid: `t = (1/c) ∫ b(s) ds`, integrated with composite Simpson. The
    /// mean collaborative speed `b̄ = c t / τ` is returned alongside, where
    /// `τ` is the span of the grid.
    pub fn elapsed_observer_time(&self, tau: &[f64], b: &[f64]) -> Result<ElapsedTime> {
        // 1 ulp of slack: b is usually computed as hypot(c, |u|).
        if let Some(bad) = b.iter().find(|&&bi| !(bi >= self.c * (1.0 - f64::EPSILON))) {
            return Err(Error::Domain(format!(
                "collaborative speed sample {bad} is below c = {}",
                self.c
            )));
        }
        let integral = quadrature::simpson(tau, b)?;
        let span = tau[tau.len() - 1] - tau[0];
        let t = integral / self.c;
        Ok(ElapsedTime {
            t,
            b_bar: self.c * t / span,
        })
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

/// Result of [`UnitSystem::elapsed_observer_time`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElapsedTime {
    /// Observer time elapsed over the grid.
    pub t: f64,
    /// Mean collaborative speed over the grid.
    pub b_bar: f64,
}

/// Position, proper velocity and both clocks of a source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState {
    pub x: Vec3,
    pub u: Vec3,
    pub tau: f64,
    pub t: f64,
}

impl KinematicState {
    pub fn new(x: Vec3, u: Vec3, tau: f64, t: f64) -> Self {
        Self { x, u, tau, t }
    }

    pub fn b(&self, units: &UnitSystem) -> f64 {
        units.collaborative_speed(&self.u)
    }

    pub fn w(&self, units: &UnitSystem) -> Vec3 {
        units.observer_from_proper(&self.u)
    }
}

/// Proper-speed reading of an apparent transverse speed: the apparent speed is
/// taken as `|u|`, and the matching observer speed and collaborative speed are
/// reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProperSpeedReading {
    pub u: f64,
    pub w: f64,
    pub b: f64,
}

pub fn proper_speed_reading(apparent_speed: f64, units: &UnitSystem) -> Result<ProperSpeedReading> {
    if !(apparent_speed >= 0.0) || !apparent_speed.is_finite() {
        return Err(Error::Domain(format!(
            "apparent speed must be finite and non-negative, got {apparent_speed}"
        )));
    }
    let u = Vec3::new(apparent_speed, 0.0, 0.0);
    let b = units.collaborative_speed(&u);
    Ok(ProperSpeedReading {
        u: apparent_speed,
        w: apparent_speed * units.c() / b,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn gamma_examples() {
        let u = UnitSystem::natural();
        assert_eq!(u.gamma(&Vec3::zeros()).unwrap(), 1.0);
        assert!(close(
            u.gamma(&Vec3::new(0.6, 0.0, 0.0)).unwrap(),
            1.25,
            1e-15
        ));
        assert!(close(
            u.gamma(&Vec3::new(0.8, 0.0, 0.0)).unwrap(),
            5.0 / 3.0,
            1e-15
        ));
        assert!(u.gamma(&Vec3::new(1.0, 0.0, 0.0)).is_err());
        assert!(u.gamma(&Vec3::new(0.0, 0.8, 0.8)).is_err());
    }

    #[test]
    fn gamma_with_si_lightspeed() {
        let u = UnitSystem::si_lightspeed();
        let g = u.gamma(&Vec3::new(0.6 * C_SI, 0.0, 0.0)).unwrap();
        assert!(close(g, 1.25, 1e-14));
    }

    #[test]
    fn proper_and_observer_examples() {
        let u = UnitSystem::natural();
        assert_eq!(
            u.proper_from_observer(&Vec3::zeros()).unwrap(),
            Vec3::zeros()
        );
        let p = u.proper_from_observer(&Vec3::new(0.6, 0.0, 0.0)).unwrap();
        assert!(close(p.x, 0.75, 1e-15));
        let p = u.proper_from_observer(&Vec3::new(0.8, 0.0, 0.0)).unwrap();
        assert!(close(p.x, 4.0 / 3.0, 1e-15) && p.x > 1.0);

        assert_eq!(u.observer_from_proper(&Vec3::zeros()), Vec3::zeros());
        assert!(close(
            u.observer_from_proper(&Vec3::new(0.75, 0.0, 0.0)).x,
            0.6,
            1e-15
        ));
        assert!(close(
            u.observer_from_proper(&Vec3::new(4.0 / 3.0, 0.0, 0.0)).x,
            0.8,
            1e-15
        ));
    }

    #[test]
    fn collaborative_speed_examples() {
        let u = UnitSystem::natural();
        assert_eq!(u.collaborative_speed(&Vec3::zeros()), 1.0);
        assert!(close(
            u.collaborative_speed(&Vec3::new(0.75, 0.0, 0.0)),
            1.25,
            1e-15
        ));
        assert!(close(
            u.collaborative_speed(&Vec3::new(4.0 / 3.0, 0.0, 0.0)),
            5.0 / 3.0,
            1e-15
        ));
    }

    #[test]
    fn elapsed_time_constant_integrands() {
        let units = UnitSystem::natural();
        let tau: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let rest = vec![1.0; tau.len()];
        let e = units.elapsed_observer_time(&tau, &rest).unwrap();
        assert!(close(e.t, 3.0, 1e-14) && close(e.b_bar, 1.0, 1e-14));

        let moving = vec![1.25; tau.len()];
        let e = units.elapsed_observer_time(&tau, &moving).unwrap();
        assert!(close(e.t, 1.25 * 3.0, 1e-14));
    }

    #[test]
    fn elapsed_time_closed_form_antiderivative() {
        // ∫₀¹ sqrt(1 + s²) ds = [s sqrt(1+s²) + asinh(s)] / 2
        let units = UnitSystem::natural();
        let tau: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
        let b: Vec<f64> = tau.iter().map(|s| (1.0 + s * s).sqrt()).collect();
        let exact = 0.5 * (2f64.sqrt() + (1.0 + 2f64.sqrt()).ln());
        let e = units.elapsed_observer_time(&tau, &b).unwrap();
        assert!((e.t - exact).abs() < 1e-10, "{} vs {}", e.t, exact);
        assert!((e.t - 1.14779).abs() < 1e-5);
    }

    #[test]
    fn elapsed_time_rejects_bad_input() {
        let units = UnitSystem::natural();
        assert!(units
            .elapsed_observer_time(&[0.0, 1.0], &[1.0, 0.9])
            .is_err());
        assert!(units
            .elapsed_observer_time(&[0.0, 1.0, 0.5], &[1.0; 3])
            .is_err());
    }

    #[test]
    fn invalid_lightspeed_rejected() {
        assert!(UnitSystem::new(0.0).is_err());
        assert!(UnitSystem::new(-1.0).is_err());
        assert!(UnitSystem::new(f64::NAN).is_err());
    }

    #[test]
    fn apparent_speed_reading() {
        let units = UnitSystem::natural();
        let r = proper_speed_reading(10.0, &units).unwrap();
        assert!(r.w < 1.0 && r.b > 10.0);
        assert!(close(r.w / units.c(), r.u / r.b, 1e-15));
    }
}
