//! The proper-time group.
//!
//! These transforms map the observations of one inertial observer onto
//! another while keeping the source clock `τ` fixed. Every quantity carries
//! the source's proper time unchanged; only positions, proper velocities,
//! accelerations, the collaborative speed `b` and the source densities move.
//!
//! Each forward transform has an inverse taking primed quantities back. The
//! inverses reuse the same starred projection `d*`, which depends on `v` only
//! through its magnitude and direction.

use crate::error::{Error, Result};
use crate::units::UnitSystem;
use crate::Vec3;

/// Relative velocity of the primed frame and its Lorentz factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostParameters {
    v: Vec3,
    gamma_v: f64,
    c: f64,
}

impl BoostParameters {
    pub fn new(v: Vec3, units: &UnitSystem) -> Result<Self> {
        let gamma_v = units.gamma(&v)?;
        Ok(Self {
            v,
            gamma_v,
            c: units.c(),
        })
    }

    pub fn identity(units: &UnitSystem) -> Self {
        Self {
            v: Vec3::zeros(),
            gamma_v: 1.0,
            c: units.c(),
        }
    }

    #[inline]
    pub fn v(&self) -> &Vec3 {
        &self.v
    }

    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma_v
    }

    #[inline]
    pub fn c(&self) -> f64 {
        self.c
    }

    fn is_identity(&self) -> bool {
        self.v.norm_squared() == 0.0
    }

    /// The boost with the opposite velocity.
    pub fn reversed(&self) -> Self {
        Self {
            v: -self.v,
            ..*self
        }
    }

    /// `d* = d/γ − (1 − γ)[(v·d)/(γ v²)] v`: the component of `d` along `v`
    /// is kept, the perpendicular part is divided by `γ`.
    pub fn dstar(&self, d: &Vec3) -> Vec3 {
        if self.is_identity() {
            return *d;
        }
        let g = self.gamma_v;
        let coeff = (1.0 - g) * self.v.dot(d) / (g * self.v.norm_squared());
        d / g - self.v * coeff
    }

    /// `x' = γ[x* − (v/c) b̄ τ]`, with `b̄` the mean collaborative speed over
    /// `[0, τ]` in the unprimed frame (so `b̄ τ / c` is the unprimed time).
    pub fn boost_event(&self, x: &Vec3, tau: f64, b_bar: f64) -> Result<Vec3> {
        self.check_lightspeed(b_bar)?;
        Ok((self.dstar(x) - self.v * (b_bar * tau / self.c)) * self.gamma_v)
    }

    /// Inverse of [`boost_event`](Self::boost_event):
    /// `x = γ[x'* + (v/c) b̄' τ]`.
    pub fn unboost_event(&self, x_prime: &Vec3, tau: f64, b_bar_prime: f64) -> Result<Vec3> {
        self.check_lightspeed(b_bar_prime)?;
        Ok((self.dstar(x_prime) + self.v * (b_bar_prime * tau / self.c)) * self.gamma_v)
    }

    /// Mean collaborative speed seen in the primed frame for the event
    /// `(x, τ)`: the observer-time transform `t' = γ(t − x·v/c²)` with
    /// `t = b̄τ/c` gives `b̄' = γ(b̄ − x·v/(cτ))`. At `τ = 0` the primed time
    /// carries no information about `b̄'`, and `b̄` is returned unchanged.
    pub fn boost_mean_lightspeed(&self, x: &Vec3, tau: f64, b_bar: f64) -> f64 {
        if tau == 0.0 {
            return b_bar;
        }
        self.gamma_v * (b_bar - x.dot(&self.v) / (self.c * tau))
    }

    /// `u' = γ[u* − (v/c) b]` with `b = sqrt(c² + u²)`.
    pub fn boost_velocity(&self, u: &Vec3) -> Vec3 {
        let b = self.c.hypot(u.norm());
        (self.dstar(u) - self.v * (b / self.c)) * self.gamma_v
    }

    /// `u = γ[u'* + (v/c) b']`.
    pub fn unboost_velocity(&self, u_prime: &Vec3) -> Vec3 {
        let b_prime = self.c.hypot(u_prime.norm());
        (self.dstar(u_prime) + self.v * (b_prime / self.c)) * self.gamma_v
    }

    /// `a' = γ{a* − v[(u·a)/(b c)]}`.
    pub fn boost_acceleration(&self, a: &Vec3, u: &Vec3) -> Vec3 {
        let b = self.c.hypot(u.norm());
        (self.dstar(a) - self.v * (u.dot(a) / (b * self.c))) * self.gamma_v
    }

    /// `a = γ{a'* + v[(u'·a')/(b' c)]}`.
    pub fn unboost_acceleration(&self, a_prime: &Vec3, u_prime: &Vec3) -> Vec3 {
        let b_prime = self.c.hypot(u_prime.norm());
        (self.dstar(a_prime) + self.v * (u_prime.dot(a_prime) / (b_prime * self.c))) * self.gamma_v
    }

    /// `b' = γ[b − u·v/c]`.
    pub fn boost_lightspeed(&self, b: f64, u: &Vec3) -> f64 {
        self.gamma_v * (b - u.dot(&self.v) / self.c)
    }

    /// `b = γ[b' + u'·v/c]`.
    pub fn unboost_lightspeed(&self, b_prime: f64, u_prime: &Vec3) -> f64 {
        self.gamma_v * (b_prime + u_prime.dot(&self.v) / self.c)
    }

    /// Transforms charge and current densities.
    ///
    /// `J' = J + (γ − 1)(J·v)v/v² − γ(b/c)ρv`, and `ρ'` from
    /// `b'ρ' = γ(bρ − J·v/c)` with `b' = γ(b − u·v/c)`.
    pub fn boost_sources(&self, s: &SourceDensities) -> SourceDensities {
        if self.is_identity() {
            return *s;
        }
        let g = self.gamma_v;
        let v2 = self.v.norm_squared();
        let jv = s.current.dot(&self.v);
        let current =
            s.current + self.v * ((g - 1.0) * jv / v2) - self.v * (g * s.b / self.c * s.rho);
        let b_prime = self.boost_lightspeed(s.b, &s.u);
        let rho = charge_density_from_product(s.rho, &s.current, s.b, b_prime, self);
        SourceDensities {
            rho,
            current,
            u: self.boost_velocity(&s.u),
            b: b_prime,
        }
    }

    /// `ρ' = [ρ − J·v/(bc)] / [1 − u·v/(bc)]`, the charge density after
    /// eliminating `b'` with the lightspeed transform.
    pub fn charge_density_reduced(&self, s: &SourceDensities) -> f64 {
        let bc = s.b * self.c;
        (s.rho - s.current.dot(&self.v) / bc) / (1.0 - s.u.dot(&self.v) / bc)
    }

    /// `ρ' = ρ[1 − u·v/b²] / [1 − u·v/(bc)]`, valid for a convective source
    /// with `J/c = ρ u / b`.
    pub fn charge_density_convective(&self, s: &SourceDensities) -> f64 {
        let uv = s.u.dot(&self.v);
        s.rho * (1.0 - uv / (s.b * s.b)) / (1.0 - uv / (s.b * self.c))
    }

    /// The conventional charge-density transform `ρ' = γ(ρ − J·v/c²)`.
    pub fn charge_density_standard(&self, rho: f64, current: &Vec3) -> f64 {
        self.gamma_v * (rho - current.dot(&self.v) / (self.c * self.c))
    }

    fn check_lightspeed(&self, b: f64) -> Result<()> {
        if !(b >= self.c * (1.0 - 4.0 * f64::EPSILON)) {
            return Err(Error::Domain(format!(
                "mean collaborative speed {b} is below c = {}",
                self.c
            )));
        }
        Ok(())
    }
}

/// Solves `b'ρ' = γ(bρ − J·v/c)` for `ρ'` with caller-supplied `b` and `b'`.
/// With `b = b' = c` this is the conventional transform.
pub fn charge_density_from_product(
    rho: f64,
    current: &Vec3,
    b: f64,
    b_prime: f64,
    boost: &BoostParameters,
) -> f64 {
    boost.gamma() * (b * rho - current.dot(boost.v()) / boost.c()) / b_prime
}

/// Charge density, current density and the proper velocity of the source
/// element carrying them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceDensities {
    pub rho: f64,
    pub current: Vec3,
    pub u: Vec3,
    pub b: f64,
}

impl SourceDensities {
    /// Densities with an independently specified current.
    pub fn new(rho: f64, current: Vec3, u: Vec3, units: &UnitSystem) -> Self {
        Self {
            rho,
            current,
            u,
            b: units.collaborative_speed(&u),
        }
    }

    /// A convective source, `J = ρ c u / b`.
    pub fn convective(rho: f64, u: Vec3, units: &UnitSystem) -> Self {
        let b = units.collaborative_speed(&u);
        Self {
            rho,
            current: u * (rho * units.c() / b),
            u,
            b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units() -> UnitSystem {
        UnitSystem::natural()
    }

    fn vclose(a: &Vec3, b: &Vec3, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn dstar_projection_rules() {
        let u = units();
        let id = BoostParameters::identity(&u);
        let d = Vec3::new(0.3, -1.2, 2.0);
        assert_eq!(id.dstar(&d), d);

        let boost = BoostParameters::new(Vec3::new(0.6, 0.0, 0.0), &u).unwrap();
        let par = Vec3::new(2.5, 0.0, 0.0);
        assert!(vclose(&boost.dstar(&par), &par, 1e-15));
        let perp = Vec3::new(0.0, 2.5, -1.0);
        assert!(vclose(&boost.dstar(&perp), &(perp / 1.25), 1e-15));
    }

    #[test]
    fn boost_rejects_superluminal_frames() {
        assert!(BoostParameters::new(Vec3::new(1.0, 0.0, 0.0), &units()).is_err());
    }

    #[test]
    fn event_examples() {
        let u = units();
        let id = BoostParameters::identity(&u);
        let x = Vec3::new(1.0, 2.0, 3.0);
        assert_eq!(id.boost_event(&x, 2.0, 1.3).unwrap(), x);

        // rest source: b̄ = c, t = τ, standard Lorentz result
        let boost = BoostParameters::new(Vec3::new(0.6, 0.0, 0.0), &u).unwrap();
        let xp = boost
            .boost_event(&Vec3::new(3.0, 0.0, 0.0), 2.0, 1.0)
            .unwrap();
        assert!((xp.x - 1.25 * (3.0 - 0.6 * 2.0)).abs() < 1e-14);

        // perpendicular offset at τ = 0 is unchanged
        let xp = boost
            .boost_event(&Vec3::new(0.0, 4.0, -2.0), 0.0, 1.0)
            .unwrap();
        assert!(vclose(&xp, &Vec3::new(0.0, 4.0, -2.0), 1e-15));

        assert!(boost.boost_event(&x, 1.0, 0.5).is_err());
    }

    #[test]
    fn velocity_examples() {
        let u = units();
        let boost = BoostParameters::new(Vec3::new(0.6, 0.0, 0.0), &u).unwrap();
        let up = boost.boost_velocity(&Vec3::zeros());
        assert!(vclose(&up, &Vec3::new(-0.75, 0.0, 0.0), 1e-15));

        let id = BoostParameters::identity(&u);
        let v = Vec3::new(0.4, 2.0, -3.0);
        assert!(vclose(&id.boost_velocity(&v), &v, 1e-15));

        let up = boost.boost_velocity(&Vec3::new(0.75, 0.0, 0.0));
        assert!(u.observer_from_proper(&up).norm() < 1e-15);
    }

    #[test]
    fn acceleration_examples() {
        let u = units();
        let boost = BoostParameters::new(Vec3::new(0.6, 0.0, 0.0), &u).unwrap();
        let vel = Vec3::new(0.5, 0.0, 0.0);
        assert_eq!(
            boost.boost_acceleration(&Vec3::zeros(), &vel),
            Vec3::zeros()
        );
        let id = BoostParameters::identity(&u);
        let a = Vec3::new(0.1, 0.2, 0.3);
        assert_eq!(id.boost_acceleration(&a, &vel), a);

        let a = Vec3::new(0.0, 0.7, 0.0);
        assert!(vclose(&boost.boost_acceleration(&a, &vel), &a, 1e-15));
    }

    #[test]
    fn lightspeed_examples() {
        let u = units();
        let boost = BoostParameters::new(Vec3::new(0.6, 0.0, 0.0), &u).unwrap();
        assert!((boost.boost_lightspeed(1.0, &Vec3::zeros()) - 1.25).abs() < 1e-15);
        let id = BoostParameters::identity(&u);
        assert_eq!(id.boost_lightspeed(1.7, &Vec3::new(1.0, 1.0, 0.7)), 1.7);
        let b = boost.boost_lightspeed(1.25, &Vec3::new(0.75, 0.0, 0.0));
        assert!((b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn static_source_density_is_frame_independent() {
        let u = units();
        let s = SourceDensities::convective(2.5, Vec3::zeros(), &u);
        let boost = BoostParameters::new(Vec3::new(0.3, -0.5, 0.6), &u).unwrap();
        let sp = boost.boost_sources(&s);
        assert!((sp.rho - 2.5).abs() < 1e-14);
    }

    #[test]
    fn identity_boost_leaves_sources_alone() {
        let u = units();
        let s = SourceDensities::new(1.5, Vec3::new(0.1, 0.2, 0.3), Vec3::new(0.4, 0.0, 0.0), &u);
        assert_eq!(BoostParameters::identity(&u).boost_sources(&s), s);
    }

    #[test]
    fn lightspeeds_equal_c_give_standard_density() {
        let u = units();
        let boost = BoostParameters::new(Vec3::new(0.2, 0.5, -0.1), &u).unwrap();
        let j = Vec3::new(0.3, -0.2, 0.9);
        let rho = 1.7;
        let a = charge_density_from_product(rho, &j, 1.0, 1.0, &boost);
        let b = boost.charge_density_standard(rho, &j);
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn reduced_and_convective_densities_agree() {
        let u = units();
        let boost = BoostParameters::new(Vec3::new(0.2, 0.5, -0.1), &u).unwrap();
        let s = SourceDensities::convective(0.8, Vec3::new(2.0, -1.0, 0.5), &u);
        let r14 = boost.charge_density_reduced(&s);
        let r15 = boost.charge_density_convective(&s);
        assert!((r14 - r15).abs() < 1e-14);
        assert!((boost.boost_sources(&s).rho - r14).abs() < 1e-13);
    }
}
