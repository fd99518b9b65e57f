//! Retarded fields of a point charge in the source's proper time.
//!
//! A signal leaves the charge at `τ′` and reaches the field point at source
//! time `τ` after covering `|x − x̄(τ′)|` at the collaborative speed `b`:
//!
//! ```text
//! |x − x̄(τ′)| = ∫_{τ′}^{τ} b(s) ds
//! ```
//!
//! For a static source this is the ordinary light cone. The left side minus
//! the right side is strictly increasing in `τ′` (its derivative is
//! `b − r̂·u > 0`), so the root is unique.

use crate::error::{Error, Result};
use crate::trajectory::SourceTrajectory;
use crate::units::UnitSystem;
use crate::Vec3;

const MAX_ITER: usize = 400;
// Look-back window, in units of the static light-travel time r/c.
const MAX_LOOKBACK: f64 = 1e12;

/// The retarded source time `τ′ < τ` seen from `x` at source time `tau`.
pub fn retarded_time(
    x: &Vec3,
    tau: f64,
    traj: &dyn SourceTrajectory,
    units: &UnitSystem,
) -> Result<f64> {
    let (lo_dom, hi_dom) = traj.domain();
    if !(tau > lo_dom && tau <= hi_dom) {
        return Err(Error::NoRetardedSolution(format!(
            "observation time {tau} is outside the trajectory interval [{lo_dom}, {hi_dom}]"
        )));
    }
    let r0 = (x - traj.position(tau)).norm();
    if r0 == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    let residual =
        |tp: f64| (x - traj.position(tp)).norm() - traj.lightspeed_integral(tp, tau, units);

    // The integral grows by at least c per unit of source time, so a step of
    // r0/c is always enough once the source stays put; keep doubling otherwise.
    let mut step = r0 / units.c();
    let mut hi = tau;
    let mut lo = tau - step;
    let f_lo = loop {
        if lo < lo_dom {
            lo = lo_dom;
            let f = residual(lo);
            if f > 0.0 {
                return Err(Error::NoRetardedSolution(format!(
                    "no retarded time in [{lo_dom}, {tau}] for x = ({}, {}, {})",
                    x.x, x.y, x.z
                )));
            }
            break f;
        }
        let f = residual(lo);
        if f <= 0.0 {
            break f;
        }
        hi = lo;
        step *= 2.0;
        lo = tau - step;
        if step > MAX_LOOKBACK * r0 / units.c() {
            return Err(Error::NoRetardedSolution(format!(
                "no retarded time within {step:e} of {tau} for x = ({}, {}, {})",
                x.x, x.y, x.z
            )));
        }
    };
    if f_lo == 0.0 {
        return finish(x, lo, traj);
    }

    let scale = lo.abs().max(tau.abs()).max(tau - lo);
    let mut t = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let f = residual(t);
        if f == 0.0 {
            break;
        }
        if f < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        // Newton step from the fresh point, kept only if it lands inside.
        let r = x - traj.position(t);
        let u = traj.velocity(t);
        let slope = units.collaborative_speed(&u) - r.dot(&u) / r.norm();
        let newton = t - f / slope;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let converged =
            (next - t).abs() <= 4.0 * f64::EPSILON * scale || hi - lo <= 4.0 * f64::EPSILON * scale;
        t = next;
        if converged {
            break;
        }
    }
    finish(x, t, traj)
}

fn finish(x: &Vec3, tp: f64, traj: &dyn SourceTrajectory) -> Result<f64> {
    if (x - traj.position(tp)).norm() == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    Ok(tp)
}

/// Source-to-field geometry at the retarded time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldGeometry {
    pub tau_retarded: f64,
    /// `x − x̄(τ′)`.
    pub r: Vec3,
    pub r_mag: f64,
    /// `r − (r·u)/b`.
    pub s: f64,
    /// `r − (r/b) u`.
    pub r_u: Vec3,
    pub u: Vec3,
    pub a: Vec3,
    pub b: f64,
}

pub fn field_geometry(
    x: &Vec3,
    tau_retarded: f64,
    traj: &dyn SourceTrajectory,
    units: &UnitSystem,
) -> Result<FieldGeometry> {
    let r = x - traj.position(tau_retarded);
    let r_mag = r.norm();
    if r_mag == 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    let u = traj.velocity(tau_retarded);
    let a = traj.acceleration(tau_retarded);
    let b = units.collaborative_speed(&u);
    let ru = r.dot(&u);
    // For r·u > 0 the difference cancels; b²s(r + r·u/b) = r²c² + |r × u|² does not.
    let s = if ru > 0.0 {
        let c = units.c();
        (r_mag * r_mag * c * c + r.cross(&u).norm_squared()) / (b * b * (r_mag + ru / b))
    } else {
        r_mag - ru / b
    };
    if !(s > 0.0) {
        return Err(Error::SingularGeometry(s));
    }
    Ok(FieldGeometry {
        tau_retarded,
        r,
        r_mag,
        s,
        r_u: r - u * (r_mag / b),
        u,
        a,
        b,
    })
}

/// The three terms of `E` and of `B`: velocity term, acceleration term and
/// the `u·a` term that has no counterpart in the observer-time fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTerms {
    pub electric: [Vec3; 3],
    pub magnetic: [Vec3; 3],
}

impl FieldTerms {
    pub fn electric_total(&self) -> Vec3 {
        self.electric[0] + self.electric[1] + self.electric[2]
    }

    pub fn magnetic_total(&self) -> Vec3 {
        self.magnetic[0] + self.magnetic[1] + self.magnetic[2]
    }
}

/// Evaluates both fields term by term. `B` is computed from its own
/// closed form, not as `r̂ × E`.
pub fn field_terms(g: &FieldGeometry, charge: f64) -> FieldTerms {
    let FieldGeometry {
        r,
        r_mag,
        s,
        r_u,
        u,
        a,
        b,
        ..
    } = *g;
    let b2 = b * b;
    let s3 = s * s * s;
    let ua = u.dot(&a);
    let velocity_factor = 1.0 - u.norm_squared() / b2;
    let ru_cross_a = r_u.cross(&a);
    let rhat = r / r_mag;
    // Rounding leaves a component of r × u along r; e3 has none.
    let r_cross_u = {
        let w = r.cross(&u);
        w - rhat * rhat.dot(&w)
    };

    let e1 = r_u * (charge * velocity_factor / s3);
    let e2 = r.cross(&ru_cross_a) * (charge / (b2 * s3));
    let e3 = r.cross(&u.cross(&r)) * (charge * ua / (b2 * b2 * s3));

    let b1 = r.cross(&r_u) * (charge * velocity_factor / (r_mag * s3));
    let b2v = r.cross(&r.cross(&ru_cross_a)) * (charge / (r_mag * b2 * s3));
    let b3 = r_cross_u * (charge * r_mag * ua / (b2 * b2 * s3));

    FieldTerms {
        electric: [e1, e2, e3],
        magnetic: [b1, b2v, b3],
    }
}

/// Retarded geometry and field terms at `(x, τ)`.
pub fn evaluate_fields(
    x: &Vec3,
    tau: f64,
    traj: &dyn SourceTrajectory,
    units: &UnitSystem,
) -> Result<(FieldGeometry, FieldTerms)> {
    let tp = retarded_time(x, tau, traj, units)?;
    let g = field_geometry(x, tp, traj, units)?;
    Ok((g, field_terms(&g, traj.charge())))
}

pub fn electric_field(
    x: &Vec3,
    tau: f64,
    traj: &dyn SourceTrajectory,
    units: &UnitSystem,
) -> Result<Vec3> {
    evaluate_fields(x, tau, traj, units).map(|(_, t)| t.electric_total())
}

pub fn magnetic_field(
    x: &Vec3,
    tau: f64,
    traj: &dyn SourceTrajectory,
    units: &UnitSystem,
) -> Result<Vec3> {
    evaluate_fields(x, tau, traj, units).map(|(_, t)| t.magnetic_total())
}

/// Coefficient `(u·a)/b⁴` of the first-order `∂/∂τ` term in the proper-time
/// wave equation.
pub fn dissipative_coefficient(u: &Vec3, a: &Vec3, units: &UnitSystem) -> f64 {
    let b2 = units.c() * units.c() + u.norm_squared();
    u.dot(a) / (b2 * b2)
}

/// `(b, ḃ, b̈)` from `u` and its first two derivatives.
pub fn lightspeed_rates(
    u: &Vec3,
    u_dot: &Vec3,
    u_ddot: &Vec3,
    units: &UnitSystem,
) -> (f64, f64, f64) {
    let b = units.collaborative_speed(u);
    let uud = u.dot(u_dot);
    let b_dot = uud / b;
    let b_ddot = (u.dot(u_ddot) + u_dot.norm_squared()) / b - uud * uud / (b * b * b);
    (b, b_dot, b_ddot)
}

/// `(ḃ, b̈)` by central differences of `b(τ) = sqrt(c² + u(τ)²)` with step `h`.
pub fn finite_difference_lightspeed_rates(
    traj: &dyn SourceTrajectory,
    tau: f64,
    h: f64,
    units: &UnitSystem,
) -> (f64, f64) {
    let b = |t: f64| units.collaborative_speed(&traj.velocity(t));
    let (bm, b0, bp) = (b(tau - h), b(tau), b(tau + h));
    ((bp - bm) / (2.0 * h), (bp - 2.0 * b0 + bm) / (h * h))
}

/// Sign of the effective photon-mass bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhotonMass {
    /// Bracket `≥ 0`; holds `μ = sqrt(bracket)`.
    Real(f64),
    /// Bracket `< 0`; holds the bracket itself.
    Imaginary(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectivePhotonMass {
    /// `(ħ²/c²)[b̈/(2b³) − 3ḃ²/(4b⁴)]`.
    pub bracket_lightspeed_form: f64,
    /// `(ħ²/c²)[(u·ü + u̇²)/(2b⁴) − 5(u·u̇)²/(4b⁶)]`.
    pub bracket_explicit_form: f64,
    pub mass: PhotonMass,
}

pub fn effective_photon_mass(
    u: &Vec3,
    u_dot: &Vec3,
    u_ddot: &Vec3,
    hbar: f64,
    units: &UnitSystem,
) -> EffectivePhotonMass {
    let c = units.c();
    let pref = hbar * hbar / (c * c);
    let (b, b_dot, b_ddot) = lightspeed_rates(u, u_dot, u_ddot, units);
    let b2 = b * b;
    let b4 = b2 * b2;
    let lightspeed_form = pref * (b_ddot / (2.0 * b2 * b) - 3.0 * b_dot * b_dot / (4.0 * b4));
    let uud = u.dot(u_dot);
    let explicit_form = pref
        * ((u.dot(u_ddot) + u_dot.norm_squared()) / (2.0 * b4) - 5.0 * uud * uud / (4.0 * b4 * b2));
    let mass = if lightspeed_form >= 0.0 {
        PhotonMass::Real(lightspeed_form.sqrt())
    } else {
        PhotonMass::Imaginary(lightspeed_form)
    };
    EffectivePhotonMass {
        bracket_lightspeed_form: lightspeed_form,
        bracket_explicit_form: explicit_form,
        mass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::{StaticCharge, UniformAcceleration, UniformMotion};

    #[test]
    fn static_source_uses_standard_light_cone() {
        let units = UnitSystem::natural();
        let q = StaticCharge {
            charge: 1.0,
            position: Vec3::zeros(),
        };
        let tp = retarded_time(&Vec3::new(1.0, 0.0, 0.0), 5.0, &q, &units).unwrap();
        assert!((tp - 4.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_motion_matches_quadratic_root() {
        let units = UnitSystem::natural();
        let u = Vec3::new(0.75, -0.3, 0.2);
        let src = UniformMotion {
            charge: 1.0,
            origin: Vec3::new(0.1, 0.0, 0.0),
            velocity: u,
        };
        let x = Vec3::new(2.0, 1.0, -0.5);
        let tau = 1.5;
        let r0 = x - src.position(tau);
        let ru = r0.dot(&u);
        let delta = (ru + (ru * ru + r0.norm_squared()).sqrt()) / 1.0;
        let tp = retarded_time(&x, tau, &src, &units).unwrap();
        assert!((tp - (tau - delta)).abs() < 1e-12);
    }

    #[test]
    fn on_top_of_source_is_degenerate() {
        let units = UnitSystem::natural();
        let q = StaticCharge {
            charge: 1.0,
            position: Vec3::new(1.0, 2.0, 3.0),
        };
        assert_eq!(
            retarded_time(&Vec3::new(1.0, 2.0, 3.0), 0.0, &q, &units),
            Err(Error::DegenerateGeometry)
        );
    }

    #[test]
    fn geometry_examples() {
        let units = UnitSystem::natural();
        let moving = UniformMotion {
            charge: 1.0,
            origin: Vec3::zeros(),
            velocity: Vec3::new(0.75, 0.0, 0.0),
        };
        let g = field_geometry(&Vec3::new(2.0, 0.0, 0.0), 0.0, &moving, &units).unwrap();
        assert!((g.s - 0.4 * 2.0).abs() < 1e-15);
        let g = field_geometry(&Vec3::new(0.0, 2.0, 0.0), 0.0, &moving, &units).unwrap();
        assert_eq!(g.s, 2.0);
    }

    #[test]
    fn coulomb_field_of_static_charge() {
        let units = UnitSystem::natural();
        let q = StaticCharge {
            charge: 2.0,
            position: Vec3::zeros(),
        };
        let x = Vec3::new(1.0, -2.0, 0.5);
        let e = electric_field(&x, 3.0, &q, &units).unwrap();
        let coulomb = x * (2.0 / x.norm().powi(3));
        assert!((e - coulomb).norm() <= 1e-12 * coulomb.norm());
        assert_eq!(magnetic_field(&x, 3.0, &q, &units).unwrap(), Vec3::zeros());
    }

    #[test]
    fn longitudinal_electric_field_with_parallel_acceleration() {
        let units = UnitSystem::natural();
        let src = UniformAcceleration {
            charge: 1.0,
            origin: Vec3::zeros(),
            initial_velocity: Vec3::new(0.5, 0.0, 0.0),
            acceleration: Vec3::new(0.3, 0.0, 0.0),
        };
        let (g, t) = evaluate_fields(&Vec3::new(0.0, 3.0, 0.0), 2.0, &src, &units).unwrap();
        assert!(g.u.dot(&g.a) != 0.0);
        assert!(t.electric[2].norm() > 0.0);
        assert!(t.electric_total().dot(&g.u.normalize()).abs() > 0.0);
    }

    #[test]
    fn dissipative_examples() {
        let units = UnitSystem::natural();
        let u = Vec3::new(1.0, 0.0, 0.0);
        assert_eq!(dissipative_coefficient(&u, &Vec3::zeros(), &units), 0.0);
        assert_eq!(
            dissipative_coefficient(&u, &Vec3::new(0.0, 1.0, 0.0), &units),
            0.0
        );
        assert!((dissipative_coefficient(&u, &u, &units) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn photon_mass_examples() {
        let units = UnitSystem::natural();
        let z = Vec3::zeros();
        let m = effective_photon_mass(&Vec3::new(0.4, 0.1, 0.0), &z, &z, 1.0, &units);
        assert_eq!(m.bracket_lightspeed_form, 0.0);
        assert_eq!(m.mass, PhotonMass::Real(0.0));

        // u = (τ, 0, 0) at τ = 1 with ħ = 1: 1/8 − 5/32 = −1/32.
        let u = Vec3::new(1.0, 0.0, 0.0);
        let m = effective_photon_mass(&u, &u, &z, 1.0, &units);
        assert!((m.bracket_lightspeed_form + 1.0 / 32.0).abs() < 1e-15);
        assert!((m.bracket_explicit_form + 1.0 / 32.0).abs() < 1e-15);
        assert!(matches!(m.mass, PhotonMass::Imaginary(v) if v < 0.0));
    }

    #[test]
    fn photon_mass_vanishes_for_circular_motion() {
        let units = UnitSystem::natural();
        let (r, w) = (1.3_f64, 0.8_f64);
        let th = 0.4_f64;
        let u = Vec3::new(-th.sin(), th.cos(), 0.0) * (r * w);
        let ud = Vec3::new(-th.cos(), -th.sin(), 0.0) * (r * w * w);
        let udd = Vec3::new(th.sin(), -th.cos(), 0.0) * (r * w * w * w);
        let m = effective_photon_mass(&u, &ud, &udd, 1.0, &units);
        assert!(m.bracket_lightspeed_form.abs() < 1e-12);
        assert!(m.bracket_explicit_form.abs() < 1e-12);
    }
}
