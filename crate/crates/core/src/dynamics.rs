//! Single-particle mechanics generated by the canonical proper-time
//! Hamiltonian
//!
//! ```text
//! K = H²/(2mc²) + mc²/2,   H = sqrt(c²π² + m²c⁴) + V,   π = p − (e/c)A.
//! ```
//!
//! `K` and `H` share a phase space; `K` evolves the state in the particle's
//! proper time `τ`, with `dτ = (mc²/H) dt`.

use crate::error::{Error, Result};
use crate::potential::{Coulomb, FieldConfiguration};
use crate::units::UnitSystem;
use crate::Vec3;

/// Canonical state of a charged particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState {
    pub x: Vec3,
    pub p: Vec3,
    pub m: f64,
    pub e: f64,
    pub tau: f64,
}

impl PhaseState {
    pub fn new(x: Vec3, p: Vec3, m: f64, e: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::Domain(format!(
                "rest mass must be positive, got {m}"
            )));
        }
        Ok(Self {
            x,
            p,
            m,
            e,
            tau: 0.0,
        })
    }
}

/// `π = p − (e/c) A(x)`.
pub fn kinetic_momentum(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Vec3 {
    s.p - fields.vector_potential(&s.x) * (s.e / units.c())
}

/// `H₀ = sqrt(c²π² + m²c⁴)`.
pub fn free_energy(s: &PhaseState, fields: &dyn FieldConfiguration, units: &UnitSystem) -> f64 {
    let c = units.c();
    c * kinetic_momentum(s, fields, units).norm().hypot(s.m * c)
}

/// `H = H₀ + V`.
pub fn hamiltonian_h(s: &PhaseState, fields: &dyn FieldConfiguration, units: &UnitSystem) -> f64 {
    free_energy(s, fields, units) + fields.potential_energy(&s.x)
}

/// `K` from its expanded form `π²/2m + mc² + V²/(2mc²) + V H₀/(mc²)`.
pub fn canonical_k(s: &PhaseState, fields: &dyn FieldConfiguration, units: &UnitSystem) -> f64 {
    let c = units.c();
    let mc2 = s.m * c * c;
    let pi2 = kinetic_momentum(s, fields, units).norm_squared();
    let v = fields.potential_energy(&s.x);
    let h0 = free_energy(s, fields, units);
    pi2 / (2.0 * s.m) + mc2 + v * v / (2.0 * mc2) + v * h0 / mc2
}

/// `K = H²/(2mc²) + mc²/2`.
pub fn canonical_k_from_h(h: f64, m: f64, units: &UnitSystem) -> f64 {
    let mc2 = m * units.c() * units.c();
    h * h / (2.0 * mc2) + 0.5 * mc2
}

/// Renormalized mass `m̃ = m / (1 + V/H₀)`.
pub fn effective_mass_tilde(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Result<f64> {
    let factor = renormalization_factor(s, fields, units)?;
    Ok(s.m / factor)
}

fn renormalization_factor(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Result<f64> {
    let factor = 1.0 + fields.potential_energy(&s.x) / free_energy(s, fields, units);
    if factor == 0.0 || !factor.is_finite() {
        return Err(Error::SingularRenormalization(factor));
    }
    Ok(factor)
}

/// `H₀` next to `m c b`, with `b = sqrt(c² + m̃²u²/m²)` built from the
/// proper velocity `u = π/m̃`.
pub fn lightspeed_identity(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Result<(f64, f64)> {
    let mt = effective_mass_tilde(s, fields, units)?;
    let u = kinetic_momentum(s, fields, units) / mt;
    let b = units.collaborative_speed(&(u * (mt / s.m)));
    Ok((free_energy(s, fields, units), s.m * units.c() * b))
}

/// Hamilton's equations for `K`: `(dx/dτ, dp/dτ)`.
///
/// `dx/dτ = π/m̃` and
/// `dp/dτ = (e/c)(u·∇)A + (e/c) u×B − ∇V (b/c)(1 + V/H₀)` with `b = H₀/(mc)`.
pub fn hamilton_rhs(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Result<(Vec3, Vec3)> {
    let c = units.c();
    let factor = renormalization_factor(s, fields, units)?;
    let pi = kinetic_momentum(s, fields, units);
    let h0 = free_energy(s, fields, units);
    let b = h0 / (s.m * c);
    let u = pi * (factor / s.m);
    let jac = fields.vector_potential_jacobian(&s.x);
    let convective = jac * u;
    let lorentz = u.cross(&fields.magnetic_field(&s.x));
    let dp =
        (convective + lorentz) * (s.e / c) - fields.potential_gradient(&s.x) * (b / c * factor);
    Ok((u, dp))
}

/// Proper-time force `(c/b)[dp/dτ − (e/c)(u·∇)A]` split into its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceDecomposition {
    /// `eE = −∇V`.
    pub electric: Vec3,
    /// `(e/b) u × B`.
    pub magnetic: Vec3,
    /// `−∇V · V/(mcb)`, absent from the Lorentz force.
    pub potential_correction: Vec3,
}

impl ForceDecomposition {
    pub fn total(&self) -> Vec3 {
        self.electric + self.magnetic + self.potential_correction
    }
}

pub fn propertime_force(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> ForceDecomposition {
    let c = units.c();
    let h0 = free_energy(s, fields, units);
    let v = fields.potential_energy(&s.x);
    let b = h0 / (s.m * c);
    // u = π/m̃ stays finite at the pole of m̃.
    let u = kinetic_momentum(s, fields, units) * ((1.0 + v / h0) / s.m);
    let grad = fields.potential_gradient(&s.x);
    ForceDecomposition {
        electric: -grad,
        magnetic: u.cross(&fields.magnetic_field(&s.x)) * (s.e / b),
        potential_correction: -grad * (v / (s.m * c * b)),
    }
}

/// The weak-field reading of the force: `u ≈ π/m`, `b ≈ c`, giving
/// `−∇V(1 + V/mc²) + (e/c) u×B`.
pub fn weak_field_force(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Vec3 {
    let c = units.c();
    let u = kinetic_momentum(s, fields, units) / s.m;
    let v = fields.potential_energy(&s.x);
    -fields.potential_gradient(&s.x) * (1.0 + v / (s.m * c * c))
        + u.cross(&fields.magnetic_field(&s.x)) * (s.e / c)
}

fn weak_field_rhs(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> (Vec3, Vec3) {
    let c = units.c();
    let u = kinetic_momentum(s, fields, units) / s.m;
    let v = fields.potential_energy(&s.x);
    let dp = (fields.vector_potential_jacobian(&s.x) * u + u.cross(&fields.magnetic_field(&s.x)))
        * (s.e / c)
        - fields.potential_gradient(&s.x) * (1.0 + v / (s.m * c * c));
    (u, dp)
}

/// Radius at which the radial force of an attractive Coulomb potential
/// `V = −e²/r` on a particle at rest changes sign. Found by bisection in
/// `ln r` on the full force of [`propertime_force`].
pub fn coulomb_critical_radius(m: f64, e: f64, units: &UnitSystem) -> Result<f64> {
    if !(m > 0.0 && e > 0.0) {
        return Err(Error::Domain(format!(
            "mass and charge must be positive, got m = {m}, e = {e}"
        )));
    }
    let field = Coulomb::attractive(e * e);
    let radial = |ln_r: f64| -> Result<f64> {
        let r = ln_r.exp();
        let s = PhaseState::new(Vec3::new(r, 0.0, 0.0), Vec3::zeros(), m, e)?;
        Ok(propertime_force(&s, &field, units).total().x)
    };
    // Repulsive inside, attractive outside.
    let (mut lo, mut hi) = (0.0_f64, 0.0_f64);
    while radial(lo)? <= 0.0 {
        lo -= 1.0;
        if lo < -700.0 {
            return Err(Error::Domain("no repulsive core found".into()));
        }
    }
    while radial(hi)? >= 0.0 {
        hi += 1.0;
        if hi > 700.0 {
            return Err(Error::Domain("no attractive exterior found".into()));
        }
    }
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if radial(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Equations of motion used by [`integrate_orbit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrbitMode {
    /// Hamilton's equations of `K`.
    #[default]
    Exact,
    /// `u = π/m` with the weak-field force.
    WeakField,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSample {
    pub tau: f64,
    pub x: Vec3,
    pub p: Vec3,
    pub k: f64,
    pub h: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub samples: Vec<OrbitSample>,
}

impl Orbit {
    /// `max |K − K₀| / |K₀|` over the recorded samples.
    pub fn k_drift(&self) -> f64 {
        let k0 = self.samples[0].k;
        self.samples
            .iter()
            .map(|s| ((s.k - k0) / k0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_radius(&self, center: &Vec3) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.x - center).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn last(&self) -> &OrbitSample {
        self.samples
            .last()
            .expect("an orbit always holds its initial sample")
    }
}

/// Fixed-step RK4 in `τ`. Every step is recorded.
pub fn integrate_orbit(
    initial: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
    dtau: f64,
    n_steps: usize,
    mode: OrbitMode,
) -> Result<Orbit> {
    if !(dtau > 0.0) || !dtau.is_finite() {
        return Err(Error::Domain(format!("step must be positive, got {dtau}")));
    }
    let rhs = |s: &PhaseState| -> Result<(Vec3, Vec3)> {
        match mode {
            OrbitMode::Exact => hamilton_rhs(s, fields, units),
            OrbitMode::WeakField => Ok(weak_field_rhs(s, fields, units)),
        }
    };
    let record = |s: &PhaseState| {
        let h = hamiltonian_h(s, fields, units);
        OrbitSample {
            tau: s.tau,
            x: s.x,
            p: s.p,
            k: canonical_k_from_h(h, s.m, units),
            h,
            b: free_energy(s, fields, units) / (s.m * units.c()),
        }
    };
    let abort = |step: usize, e: Error| Error::IntegrationAborted {
        step,
        reason: e.to_string(),
    };

    let mut s = *initial;
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(record(&s));
    for step in 1..=n_steps {
        let shifted = |dx: Vec3, dp: Vec3, f: f64| PhaseState {
            x: s.x + dx * f,
            p: s.p + dp * f,
            ..s
        };
        let (k1x, k1p) = rhs(&s).map_err(|e| abort(step, e))?;
        let (k2x, k2p) = rhs(&shifted(k1x, k1p, 0.5 * dtau)).map_err(|e| abort(step, e))?;
        let (k3x, k3p) = rhs(&shifted(k2x, k2p, 0.5 * dtau)).map_err(|e| abort(step, e))?;
        let (k4x, k4p) = rhs(&shifted(k3x, k3p, dtau)).map_err(|e| abort(step, e))?;
        s.x += (k1x + (k2x + k3x) * 2.0 + k4x) * (dtau / 6.0);
        s.p += (k1p + (k2p + k3p) * 2.0 + k4p) * (dtau / 6.0);
        s.tau = initial.tau + step as f64 * dtau;
        let sample = record(&s);
        if !(sample
            .x
            .iter()
            .chain(sample.p.iter())
            .all(|v| v.is_finite())
            && sample.k.is_finite())
        {
            return Err(abort(step, Error::Domain("state became non-finite".into())));
        }
        samples.push(sample);
    }
    Ok(Orbit { samples })
}

/// Spatial coefficient `1/(1 + V/H₀)²` of the deformed line element
/// `c²dt² = c²dτ² + dx²/(1 + V/H₀)²`.
pub fn metric_deformation(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Result<f64> {
    let factor = renormalization_factor(s, fields, units)?;
    let g = 1.0 / (factor * factor);
    if !g.is_finite() {
        return Err(Error::SingularRenormalization(factor));
    }
    Ok(g)
}

/// Canonical momentum `p = m̃u + (e/c)A` belonging to the proper velocity `u`
/// at `x`. The renormalized mass depends on `|π| = m̃|u|` through `H₀`, so
/// `|π|` is found by bisection.
pub fn canonical_momentum(
    x: &Vec3,
    u: &Vec3,
    m: f64,
    e: f64,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Result<Vec3> {
    let mt = tilde_mass_for_velocity(x, u, m, fields, units)?;
    Ok(u * mt + fields.vector_potential(x) * (e / units.c()))
}

fn tilde_mass_for_velocity(
    x: &Vec3,
    u: &Vec3,
    m: f64,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Result<f64> {
    let c = units.c();
    let v = fields.potential_energy(x);
    let speed = u.norm();
    let factor_at = |pi: f64| 1.0 + v / (c * pi.hypot(m * c));
    if speed == 0.0 {
        let f = factor_at(0.0);
        return if f > 0.0 {
            Ok(m / f)
        } else {
            Err(Error::SingularRenormalization(f))
        };
    }
    // |u| = (π/m)(1 + V/H₀(π)); increasing in π whenever V > −mc².
    let g = |pi: f64| pi / m * factor_at(pi) - speed;
    let mut hi = m * speed.max(c);
    let mut tries = 0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 2000 {
            return Err(Error::Domain(
                "no momentum matches the proper velocity".into(),
            ));
        }
    }
    let mut lo = 0.0;
    if g(lo) > 0.0 {
        return Err(Error::SingularRenormalization(factor_at(0.0)));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let pi = 0.5 * (lo + hi);
    let f = factor_at(pi);
    if f == 0.0 {
        return Err(Error::SingularRenormalization(f));
    }
    Ok(m / f)
}

/// `L = m̃u² − (m̃u²/2)(m̃/m) − mc² − V²/(2mc²) − V b/c + (e/c)A·u` with
/// `b = sqrt(c² + m̃²u²/m²)`.
pub fn lagrangian(
    x: &Vec3,
    u: &Vec3,
    m: f64,
    e: f64,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> Result<f64> {
    let c = units.c();
    let mt = tilde_mass_for_velocity(x, u, m, fields, units)?;
    let u2 = u.norm_squared();
    let v = fields.potential_energy(x);
    let b = c.hypot(mt * u.norm() / m);
    let mc2 = m * c * c;
    Ok(
        mt * u2 - 0.5 * mt * u2 * (mt / m) - mc2 - v * v / (2.0 * mc2) - v * b / c
            + fields.vector_potential(x).dot(u) * (e / c),
    )
}

/// Behaviour of `K` and of the clock rate under reversal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeReversal {
    pub k: f64,
    /// `K` with `p → −p`.
    pub k_reversed_momentum: f64,
    /// `K` with `H → −H`.
    pub k_negative_energy: f64,
    /// `dτ/dt = mc²/H`.
    pub clock_rate: f64,
    /// `dτ/dt` with `H → −H`.
    pub clock_rate_negative_energy: f64,
}

pub fn time_reversal_check(
    s: &PhaseState,
    fields: &dyn FieldConfiguration,
    units: &UnitSystem,
) -> TimeReversal {
    let mc2 = s.m * units.c() * units.c();
    let h = hamiltonian_h(s, fields, units);
    let flipped = PhaseState { p: -s.p, ..*s };
    TimeReversal {
        k: canonical_k_from_h(h, s.m, units),
        k_reversed_momentum: canonical_k(&flipped, fields, units),
        k_negative_energy: canonical_k_from_h(-h, s.m, units),
        clock_rate: mc2 / h,
        clock_rate_negative_energy: mc2 / -h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::FreeField;

    struct ConstantPotential(f64);

    impl FieldConfiguration for ConstantPotential {
        fn potential_energy(&self, _x: &Vec3) -> f64 {
            self.0
        }
    }

    fn at_rest(m: f64) -> PhaseState {
        PhaseState::new(Vec3::zeros(), Vec3::zeros(), m, 1.0).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let u = UnitSystem::natural();
        assert_eq!(hamiltonian_h(&at_rest(1.0), &FreeField, &u), 1.0);
        let s = PhaseState::new(Vec3::zeros(), Vec3::new(1.0, 0.0, 0.0), 1.0, 1.0).unwrap();
        assert!((hamiltonian_h(&s, &FreeField, &u) - 2f64.sqrt()).abs() < 1e-15);
        assert!((hamiltonian_h(&at_rest(1.0), &ConstantPotential(-0.1), &u) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn k_examples() {
        let u = UnitSystem::natural();
        assert_eq!(canonical_k(&at_rest(1.0), &FreeField, &u), 1.0);
        assert!((canonical_k_from_h(2.0, 1.0, &u) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn renormalized_mass_examples() {
        let u = UnitSystem::natural();
        let s = at_rest(2.0);
        assert_eq!(effective_mass_tilde(&s, &FreeField, &u).unwrap(), 2.0);
        assert!(
            (effective_mass_tilde(&s, &ConstantPotential(2.0), &u).unwrap() - 1.0).abs() < 1e-15
        );
        assert!(matches!(
            effective_mass_tilde(&s, &ConstantPotential(-2.0), &u),
            Err(Error::SingularRenormalization(_))
        ));
    }

    #[test]
    fn metric_examples() {
        let u = UnitSystem::natural();
        let s = at_rest(1.0);
        assert_eq!(metric_deformation(&s, &FreeField, &u).unwrap(), 1.0);
        assert!(
            (metric_deformation(&s, &ConstantPotential(1.0), &u).unwrap() - 0.25).abs() < 1e-15
        );
        assert!(metric_deformation(&s, &ConstantPotential(-1.0), &u).is_err());
        let near = metric_deformation(&s, &ConstantPotential(-1.0 + 1e-6), &u).unwrap();
        assert!(near > 1e11);
    }

    #[test]
    fn free_motion_is_straight() {
        let u = UnitSystem::natural();
        let s =
            PhaseState::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.3, 0.4, 0.0), 2.0, 1.0).unwrap();
        let (dx, dp) = hamilton_rhs(&s, &FreeField, &u).unwrap();
        assert_eq!(dx, s.p / 2.0);
        assert_eq!(dp, Vec3::zeros());
        let orbit = integrate_orbit(&s, &FreeField, &u, 0.1, 50, OrbitMode::Exact).unwrap();
        let end = orbit.last();
        assert!((end.x - (s.x + s.p / 2.0 * 5.0)).norm() < 1e-13);
    }

    #[test]
    fn coulomb_force_is_central() {
        let u = UnitSystem::natural();
        let s = PhaseState::new(
            Vec3::new(1.0, 2.0, -1.0),
            Vec3::new(0.2, 0.4, -0.2),
            1.0,
            1.0,
        )
        .unwrap();
        let (_, dp) = hamilton_rhs(&s, &Coulomb::attractive(0.3), &u).unwrap();
        assert!(dp.cross(&s.x).norm() < 1e-15 * dp.norm());
    }

    #[test]
    fn critical_radius_examples() {
        let u = UnitSystem::natural();
        assert!((coulomb_critical_radius(1.0, 1.0, &u).unwrap() - 1.0).abs() < 1e-10);
        assert!((coulomb_critical_radius(2.0, 1.0, &u).unwrap() - 0.5).abs() < 1e-10);
        let s = PhaseState::new(Vec3::new(0.25, 0.0, 0.0), Vec3::zeros(), 2.0, 1.0).unwrap();
        assert!(
            propertime_force(&s, &Coulomb::attractive(1.0), &u)
                .total()
                .x
                > 0.0
        );
    }

    #[test]
    fn free_lagrangian() {
        let u = UnitSystem::natural();
        assert_eq!(
            lagrangian(&Vec3::zeros(), &Vec3::zeros(), 1.0, 1.0, &FreeField, &u).unwrap(),
            -1.0
        );
        let vel = Vec3::new(0.3, -0.2, 0.5);
        let l = lagrangian(&Vec3::zeros(), &vel, 2.0, 1.0, &FreeField, &u).unwrap();
        assert!((l - (vel.norm_squared() - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn reversal_examples() {
        let u = UnitSystem::natural();
        let s = PhaseState::new(
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.5, -0.2, 0.1),
            1.0,
            1.0,
        )
        .unwrap();
        let r = time_reversal_check(&s, &Coulomb::attractive(0.2), &u);
        assert_eq!(r.k, r.k_negative_energy);
        assert!((r.k - r.k_reversed_momentum).abs() < 1e-15);
        assert_eq!(r.clock_rate, -r.clock_rate_negative_energy);
    }
}
