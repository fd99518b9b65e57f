//! The invariant suite behind `ptcli verify`: seeded random checks of every
//! library module, each reduced to one worst-case residual and its bound.

use std::fmt::Write as _;

use propertime::dynamics::{
    canonical_k, coulomb_critical_radius, hamilton_rhs, integrate_orbit, OrbitMode, PhaseState,
};
use propertime::fields::{
    effective_photon_mass, evaluate_fields, field_terms, finite_difference_lightspeed_rates,
    lightspeed_rates, FieldGeometry,
};
use propertime::group::{charge_density_from_product, BoostParameters, SourceDensities};
use propertime::many_body::{
    evolve_free, evolve_observable, generating_identity_residual, verify_algebra, Particle,
    ParticleSystem,
};
use propertime::potential::{Coulomb, Superposed, UniformMagnetic};
use propertime::spectral::{
    apply_sqrt_operator, dirac_to_k_eigenvalue, kernel_tail_decay, momentum_oracle,
    KernelDimension, KernelParameters, RadialGridFunction,
};
use propertime::trajectory::{CircularMotion, SourceTrajectory, StaticCharge, UniformAcceleration};
use propertime::{UnitSystem, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, InModule};
use crate::scenarios::{redshift_z, VelocityInput};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// Passes when `value ≤ bound`.
    AtMost(f64),
    /// Passes when `value ≥ bound`.
    AtLeast(f64),
    /// Passes when `value > bound`.
    Above(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub value: f64,
    pub bound: Bound,
}

impl Check {
    fn new(module: &'static str, name: &'static str, value: f64, bound: Bound) -> Self {
        Self {
            module,
            name,
            value,
            bound,
        }
    }

    /// NaN never passes.
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost(b) => self.value <= b,
            Bound::AtLeast(b) => self.value >= b,
            Bound::Above(b) => self.value > b,
        }
    }
}

type Group = fn(&mut ChaCha8Rng) -> Result<Vec<Check>, CliError>;

const GROUPS: [(&str, Group); 9] = [
    ("units", kinematics),
    ("group", group),
    ("sources", sources),
    ("fields", fields),
    ("photon_mass", photon_mass),
    ("dynamics", dynamics),
    ("many_body", many_body),
    ("spectral", spectral),
    ("redshift", redshift),
];

/// Runs every group with its own generator derived from `seed`, so the result
/// does not depend on `parallel`.
pub fn run_suite(seed: u64, parallel: bool) -> Result<Vec<Check>, CliError> {
    let run = |i: usize, g: Group| g(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64)));
    let results: Vec<Result<Vec<Check>, CliError>> = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = GROUPS
                .iter()
                .enumerate()
                .map(|(i, &(_, g))| s.spawn(move || run(i, g)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verify worker panicked"))
                .collect()
        })
    } else {
        GROUPS
            .iter()
            .enumerate()
            .map(|(i, &(_, g))| run(i, g))
            .collect()
    };
    let mut all = Vec::new();
    for r in results {
        all.extend(r?);
    }
    Ok(all)
}

pub fn render(checks: &[Check]) -> String {
    let mut out = String::new();
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let _ = writeln!(
        out,
        "{:<12} {:<width$} {:>12} {:>14}  status",
        "module", "check", "value", "bound"
    );
    for c in checks {
        let bound = match c.bound {
            Bound::AtMost(b) => format!("<= {b:.1e}"),
            Bound::AtLeast(b) => format!(">= {b}"),
            Bound::Above(b) => format!("> {b}"),
        };
        let status = if c.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<12} {:<width$} {:>12.3e} {:>14}  {status}",
            c.module, c.name, c.value, bound
        );
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let _ = writeln!(out, "{} checks, {failed} failed", checks.len());
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn vrel(a: &Vec3, b: &Vec3) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn subluminal(rng: &mut ChaCha8Rng, max: f64) -> Vec3 {
    let r = rng.gen_range(0.0..max);
    let cz: f64 = rng.gen_range(-1.0..1.0);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - cz * cz).sqrt();
    Vec3::new(s * phi.cos(), s * phi.sin(), cz) * r
}

fn cube(rng: &mut ChaCha8Rng, half: f64) -> Vec3 {
    Vec3::from_fn(|_, _| rng.gen_range(-half..half))
}

/// Max and min that keep NaN, so a failed evaluation cannot be hidden.
trait Sticky {
    fn worse(self, other: f64) -> f64;
    fn least(self, other: f64) -> f64;
}

impl Sticky for f64 {
    fn worse(self, other: f64) -> f64 {
        if self.is_nan() || other.is_nan() {
            f64::NAN
        } else {
            self.max(other)
        }
    }

    fn least(self, other: f64) -> f64 {
        if self.is_nan() || other.is_nan() {
            f64::NAN
        } else {
            self.min(other)
        }
    }
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::worse)
}

fn kinematics(rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let u = UnitSystem::natural();
    let (mut gamma_c, mut ratio, mut roundtrip) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let w = subluminal(rng, 0.999);
        let up = u.proper_from_observer(&w).in_module("units")?;
        let b = u.collaborative_speed(&up);
        gamma_c = gamma_c.worse(rel(b, u.gamma(&w).in_module("units")? * u.c()));
        ratio = ratio.worse(vrel(&(w / u.c()), &(up / b)));
        roundtrip =
            roundtrip.worse((u.observer_from_proper(&up) - w).norm() / w.norm().max(1e-300));
    }
    Ok(vec![
        Check::new("units", "b = gamma c", gamma_c, Bound::AtMost(1e-12)),
        Check::new("units", "w/c = u/b", ratio, Bound::AtMost(1e-12)),
        Check::new(
            "units",
            "u <-> w roundtrip",
            roundtrip,
            Bound::AtMost(1e-12),
        ),
    ])
}

/// Relativistic velocity addition: `w` seen from a frame moving at `v`.
pub fn einstein_addition(w: &Vec3, v: &Vec3, c: f64) -> Vec3 {
    let v2 = v.norm_squared();
    if v2 == 0.0 {
        return *w;
    }
    let g = 1.0 / (1.0 - v2 / (c * c)).sqrt();
    let vw = v.dot(w);
    (w / g - v + v * ((g - 1.0) / g * vw / v2)) / (1.0 - vw / (c * c))
}

fn group(rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let u = UnitSystem::natural();
    let (mut shell, mut trip, mut addition) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1_000 {
        let up = cube(rng, 5.0);
        let a = cube(rng, 5.0);
        let v = subluminal(rng, 0.95);
        let tau = rng.gen_range(0.1..10.0);
        let boost = BoostParameters::new(v, &u).in_module("group")?;
        let b = u.collaborative_speed(&up);
        let u_p = boost.boost_velocity(&up);
        let b_p = boost.boost_lightspeed(b, &up);
        shell = shell.worse(rel(b_p * b_p, u.c() * u.c() + u_p.norm_squared()));
        let a_p = boost.boost_acceleration(&a, &up);
        let x = up * tau;
        let x_p = boost.boost_event(&x, tau, b).in_module("group")?;
        let bbar_p = boost.boost_mean_lightspeed(&x, tau, b);
        let back_x = boost.unboost_event(&x_p, tau, bbar_p).in_module("group")?;
        trip = trip
            .worse(vrel(&boost.unboost_velocity(&u_p), &up))
            .worse(vrel(&boost.unboost_acceleration(&a_p, &u_p), &a))
            .worse(rel(boost.unboost_lightspeed(b_p, &u_p), b))
            .worse((back_x - x).norm() / x.norm().max(1.0));
        let via_group = u.observer_from_proper(&u_p);
        addition = addition
            .worse((via_group - einstein_addition(&u.observer_from_proper(&up), &v, u.c())).norm());
    }
    Ok(vec![
        Check::new("group", "b'^2 = c^2 + u'^2", shell, Bound::AtMost(1e-12)),
        Check::new("group", "transform roundtrips", trip, Bound::AtMost(1e-10)),
        Check::new(
            "group",
            "velocity addition oracle",
            addition,
            Bound::AtMost(1e-10),
        ),
    ])
}

fn sources(rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let u = UnitSystem::natural();
    let mut invariant = 0.0f64;
    for _ in 0..100 {
        let rho = rng.gen_range(-10.0..10.0);
        let boost = BoostParameters::new(subluminal(rng, 0.99), &u).in_module("group")?;
        let s = SourceDensities::convective(rho, Vec3::zeros(), &u);
        invariant =
            invariant.worse((boost.boost_sources(&s).rho - rho).abs() / f64::max(rho.abs(), 1.0));
    }
    let (mut forms, mut standard) = (0.0f64, 0.0f64);
    for _ in 0..1_000 {
        let rho = rng.gen_range(0.1..10.0);
        let up = cube(rng, 5.0);
        let boost = BoostParameters::new(subluminal(rng, 0.95), &u).in_module("group")?;
        let s = SourceDensities::convective(rho, up, &u);
        let reduced = boost.charge_density_reduced(&s);
        forms = forms
            .worse(rel(boost.charge_density_convective(&s), reduced))
            .worse(rel(boost.boost_sources(&s).rho, reduced));
        let j = cube(rng, 5.0);
        let scale = boost.gamma() * (rho.abs() + j.dot(boost.v()).abs() / (u.c() * u.c()));
        let via_product = charge_density_from_product(rho, &j, u.c(), u.c(), &boost);
        standard =
            standard.worse((via_product - boost.charge_density_standard(rho, &j)).abs() / scale);
    }
    Ok(vec![
        Check::new(
            "group",
            "static source rho' = rho",
            invariant,
            Bound::AtMost(1e-14),
        ),
        Check::new("group", "density forms agree", forms, Bound::AtMost(1e-12)),
        Check::new(
            "group",
            "b = b' = c gives standard rho'",
            standard,
            Bound::AtMost(1e-12),
        ),
    ])
}

fn fields(rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let u = UnitSystem::natural();
    let mut coulomb = 0.0f64;
    for _ in 0..100 {
        let q = StaticCharge {
            charge: rng.gen_range(-3.0..3.0),
            position: cube(rng, 1.0),
        };
        let x = cube(rng, 5.0);
        let r = x - q.position;
        if r.norm() < 1e-2 {
            continue;
        }
        let (_, t) = evaluate_fields(&x, rng.gen_range(0.0..3.0), &q, &u).in_module("fields")?;
        let expected = r * (q.charge / r.norm().powi(3));
        coulomb =
            coulomb.worse((t.electric_total() - expected).norm() / expected.norm().max(1e-300));
    }
    let (mut cross, mut orthogonal) = (0.0f64, 0.0f64);
    for _ in 0..1_000 {
        let src = UniformAcceleration {
            charge: 1.3,
            origin: cube(rng, 1.0),
            initial_velocity: cube(rng, 3.0),
            acceleration: cube(rng, 1.0),
        };
        let x = cube(rng, 6.0);
        let tau = rng.gen_range(0.0..2.0);
        if (x - src.position(tau)).norm() < 1e-2 {
            continue;
        }
        let (g, t) = evaluate_fields(&x, tau, &src, &u).in_module("fields")?;
        let (e, b) = (t.electric_total(), t.magnetic_total());
        let e_scale: f64 = t.electric.iter().map(|v| v.norm()).sum();
        let b_scale: f64 = t.magnetic.iter().map(|v| v.norm()).sum();
        cross = cross.worse((b - (g.r / g.r_mag).cross(&e)).norm() / e_scale);
        orthogonal = orthogonal.worse(b.dot(&e).abs() / (e_scale * b_scale.max(f64::MIN_POSITIVE)));
    }
    let mut third = 0.0f64;
    let mut third_present = f64::INFINITY;
    for _ in 0..1_000 {
        let r = cube(rng, 4.0);
        let ux = rng.gen_range(-3.0..3.0);
        let a = Vec3::new(0.0, rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let t = field_terms(&geometry(r, Vec3::new(ux, 0.0, 0.0), a, &u), 1.0);
        third = third
            .worse(t.electric[2].norm())
            .worse(t.magnetic[2].norm());
        let up = cube(rng, 3.0);
        let ap = cube(rng, 2.0);
        if up.dot(&ap).abs() > 1e-3 && r.cross(&up).norm() > 1e-3 {
            let t = field_terms(&geometry(r, up, ap, &u), 1.0);
            third_present = third_present
                .least(t.electric[2].norm())
                .least(t.magnetic[2].norm());
        }
    }
    Ok(vec![
        Check::new(
            "fields",
            "static source is Coulomb",
            coulomb,
            Bound::AtMost(1e-12),
        ),
        Check::new("fields", "B = rhat x E", cross, Bound::AtMost(1e-11)),
        Check::new("fields", "E . B = 0", orthogonal, Bound::AtMost(1e-11)),
        Check::new(
            "fields",
            "third terms with u.a = 0",
            third,
            Bound::AtMost(0.0),
        ),
        Check::new(
            "fields",
            "third terms with u.a != 0",
            third_present,
            Bound::Above(0.0),
        ),
    ])
}

/// Retarded geometry for a source at the origin seen from `r`.
fn geometry(r: Vec3, u: Vec3, a: Vec3, units: &UnitSystem) -> FieldGeometry {
    let b = units.collaborative_speed(&u);
    let r_mag = r.norm();
    let s = r_mag - r.dot(&u) / b;
    FieldGeometry {
        tau_retarded: 0.0,
        r,
        r_mag,
        s,
        r_u: r - u * (r_mag / b),
        u,
        a,
        b,
    }
}

fn photon_mass(rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let u = UnitSystem::natural();
    let mut agree = 0.0f64;
    for _ in 0..1_000 {
        let (up, ud, udd) = (cube(rng, 4.0), cube(rng, 3.0), cube(rng, 3.0));
        let hbar = rng.gen_range(0.1..3.0);
        let m = effective_photon_mass(&up, &ud, &udd, hbar, &u);
        let b2 = 1.0 + up.norm_squared();
        let scale = hbar
            * hbar
            * ((up.dot(&udd) + ud.norm_squared()).abs() / (2.0 * b2 * b2)
                + 5.0 * up.dot(&ud).powi(2) / (4.0 * b2 * b2 * b2));
        agree = agree
            .worse((m.bracket_lightspeed_form - m.bracket_explicit_form).abs() / scale.max(1e-300));
    }
    let circle = CircularMotion {
        charge: 1.0,
        center: Vec3::zeros(),
        radius: rng.gen_range(0.5..3.0),
        omega: rng.gen_range(0.2..2.0),
    };
    let mut circular = 0.0f64;
    for _ in 0..20 {
        let tau = rng.gen_range(0.0..10.0);
        let m = effective_photon_mass(
            &circle.velocity(tau),
            &circle.acceleration(tau),
            &circle
                .jerk(tau)
                .expect("circular motion has a closed-form jerk"),
            1.0,
            &u,
        );
        circular = circular
            .worse(m.bracket_lightspeed_form.abs())
            .worse(m.bracket_explicit_form.abs());
    }
    let src = UniformAcceleration {
        charge: 1.0,
        origin: Vec3::zeros(),
        initial_velocity: Vec3::new(0.7, -0.2, 0.4),
        acceleration: Vec3::new(0.3, 0.5, -0.2),
    };
    let tau = 0.8;
    let (_, bd, bdd) = lightspeed_rates(
        &src.velocity(tau),
        &src.acceleration(tau),
        &Vec3::zeros(),
        &u,
    );
    let err = |h: f64| {
        let (d1, d2) = finite_difference_lightspeed_rates(&src, tau, h, &u);
        ((d1 - bd).abs(), (d2 - bdd).abs())
    };
    let (a1, a2) = err(0.02);
    let (b1, b2) = err(0.01);
    let richardson = (a1 / b1 - 4.0).abs().worse((a2 / b2 - 4.0).abs());
    Ok(vec![
        Check::new(
            "fields",
            "photon mass forms agree",
            agree,
            Bound::AtMost(1e-9),
        ),
        Check::new(
            "fields",
            "circular motion photon mass",
            circular,
            Bound::AtMost(1e-12),
        ),
        Check::new(
            "fields",
            "b-derivative Richardson |ratio - 4|",
            richardson,
            Bound::AtMost(0.2),
        ),
    ])
}

fn dynamics(_rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let u = UnitSystem::natural();
    let field = Superposed(
        Coulomb {
            strength: 0.2,
            center: Vec3::new(0.1, -0.2, 0.05),
        },
        UniformMagnetic {
            field: Vec3::new(0.1, 0.3, -0.5),
        },
    );
    let s = PhaseState::new(
        Vec3::new(0.9, 0.4, -0.7),
        Vec3::new(0.3, -0.8, 0.5),
        1.2,
        0.7,
    )
    .in_module("dynamics")?;
    let (dx, dp) = hamilton_rhs(&s, &field, &u).in_module("dynamics")?;
    let fd = |h: f64| {
        let k = |x: Vec3, p: Vec3| canonical_k(&PhaseState { x, p, ..s }, &field, &u);
        let (mut gx, mut gp) = (Vec3::zeros(), Vec3::zeros());
        for i in 0..3 {
            let mut d = Vec3::zeros();
            d[i] = h;
            gx[i] = (k(s.x + d, s.p) - k(s.x - d, s.p)) / (2.0 * h);
            gp[i] = (k(s.x, s.p + d) - k(s.x, s.p - d)) / (2.0 * h);
        }
        ((gp - dx).norm(), (gx + dp).norm())
    };
    let (ex1, ep1) = fd(2e-2);
    let (ex2, ep2) = fd(1e-2);
    let rhs_order = (ex1 / ex2 - 4.0).abs().worse((ep1 / ep2 - 4.0).abs());

    let start = PhaseState::new(
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 0.45, 0.1),
        1.0,
        1.0,
    )
    .in_module("dynamics")?;
    let orbit = integrate_orbit(
        &start,
        &Coulomb::attractive(0.3),
        &u,
        1e-3,
        10_000,
        OrbitMode::Exact,
    )
    .in_module("dynamics")?;

    let mut radius = 0.0f64;
    for &(m, e) in &[(1.0, 1.0), (2.0, 1.0), (0.3, 0.8), (5.0, 2.5)] {
        let r0 = coulomb_critical_radius(m, e, &u).in_module("dynamics")?;
        radius = radius.worse(rel(r0, e * e / (m * u.c() * u.c())));
    }

    let r0 = coulomb_critical_radius(1.0, 1.0, &u).in_module("dynamics")?;
    let fall = PhaseState::new(Vec3::new(1.05 * r0, 0.0, 0.0), Vec3::zeros(), 1.0, 1.0)
        .in_module("dynamics")?;
    let infall = integrate_orbit(
        &fall,
        &Coulomb::attractive(1.0),
        &u,
        1e-3,
        20_000,
        OrbitMode::WeakField,
    )
    .in_module("dynamics")?;
    let min_radius = infall.min_radius(&Vec3::zeros()) / r0;

    Ok(vec![
        Check::new(
            "dynamics",
            "hamilton_rhs Richardson |ratio - 4|",
            rhs_order,
            Bound::AtMost(0.2),
        ),
        Check::new(
            "dynamics",
            "Coulomb orbit K drift",
            orbit.k_drift(),
            Bound::AtMost(1e-8),
        ),
        Check::new(
            "dynamics",
            "critical radius = e^2/mc^2",
            radius,
            Bound::AtMost(1e-10),
        ),
        Check::new(
            "dynamics",
            "infall minimum radius / r0",
            min_radius,
            Bound::AtLeast(0.9),
        ),
        Check::new(
            "dynamics",
            "slow orbit vs Newtonian oracle",
            newtonian_deviation(&u)?,
            Bound::AtMost(1e-4),
        ),
    ])
}

// Relative deviation after one Kepler period at |p|/mc = 0.01.
fn newtonian_deviation(u: &UnitSystem) -> Result<f64, CliError> {
    let (m, k) = (1.0, 1.2e-4);
    let x0 = Vec3::new(1.0, 0.0, 0.0);
    let p0 = Vec3::new(0.0, 0.01 * m * u.c(), 0.0);
    let energy = p0.norm_squared() / (2.0 * m) - k;
    let a = -k / (2.0 * energy);
    let period = std::f64::consts::TAU * (m * a.powi(3) / k).sqrt();
    let n = 20_000;
    let dt = period / n as f64;
    let acc = |x: &Vec3| -x * (k / (m * x.norm().powi(3)));
    let (mut x, mut v) = (x0, p0 / m);
    for _ in 0..n {
        let (k1x, k1v) = (v, acc(&x));
        let (k2x, k2v) = (v + k1v * (dt / 2.0), acc(&(x + k1x * (dt / 2.0))));
        let (k3x, k3v) = (v + k2v * (dt / 2.0), acc(&(x + k2x * (dt / 2.0))));
        let (k4x, k4v) = (v + k3v * dt, acc(&(x + k3x * dt)));
        x += (k1x + (k2x + k3x) * 2.0 + k4x) * (dt / 6.0);
        v += (k1v + (k2v + k3v) * 2.0 + k4v) * (dt / 6.0);
    }
    let s = PhaseState::new(x0, p0, m, 1.0).in_module("dynamics")?;
    let orbit = integrate_orbit(&s, &Coulomb::attractive(k), u, dt, n, OrbitMode::Exact)
        .in_module("dynamics")?;
    Ok((orbit.last().x - x).norm() / x.norm())
}

fn random_system(
    rng: &mut ChaCha8Rng,
    n: usize,
    p_max_over_mc: f64,
) -> Result<ParticleSystem, CliError> {
    let particles = (0..n)
        .map(|_| {
            let m = rng.gen_range(0.3..3.0);
            let x = cube(rng, 4.0);
            let p = subluminal(rng, p_max_over_mc) * m;
            Particle::free(m, x, p)
        })
        .collect();
    ParticleSystem::free(particles, UnitSystem::natural()).in_module("many_body")
}

// Coefficient and (particle, coordinate, is_momentum) factors.
type Monomial = (f64, Vec<(usize, usize, bool)>);

// Sum of a few random monomials of degree ≤ 3 in the phase coordinates.
fn random_observable(rng: &mut ChaCha8Rng, n: usize) -> impl Fn(&ParticleSystem) -> f64 {
    let terms: Vec<Monomial> = (0..4)
        .map(|_| {
            let coeff = rng.gen_range(-1.0..1.0);
            let degree = rng.gen_range(1..=3);
            let factors = (0..degree)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..3), rng.gen_bool(0.5)))
                .collect();
            (coeff, factors)
        })
        .collect();
    move |s: &ParticleSystem| {
        terms
            .iter()
            .map(|(coeff, factors)| {
                coeff
                    * factors
                        .iter()
                        .map(|&(i, k, momentum)| {
                            if momentum {
                                s.particles[i].p[k]
                            } else {
                                s.particles[i].x[k]
                            }
                        })
                        .product::<f64>()
            })
            .sum()
    }
}

fn many_body(rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let (mut consistency, mut clocks, mut algebra) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let sys = random_system(rng, 3, 5.0)?;
        let inv = sys.invariants().in_module("many_body")?;
        let c = sys.units.c();
        consistency = consistency
            .worse(rel(
                inv.m * c * c,
                (inv.h * inv.h - c * c * inv.p.norm_squared()).sqrt(),
            ))
            .worse(rel(inv.h, inv.m * c * inv.b));
        for (i, s) in sys
            .per_particle_speeds()
            .in_module("many_body")?
            .iter()
            .enumerate()
        {
            clocks = clocks.worse(rel(sys.clock_ratio(i).in_module("many_body")?, inv.b / s.b));
        }
        algebra = worst(
            verify_algebra(&sys)
                .in_module("many_body")?
                .iter()
                .map(|r| r.residual)
                .chain([algebra]),
        );
    }
    let mut rates = 0.0f64;
    for _ in 0..20 {
        let sys = random_system(rng, 3, 2.0)?;
        let w = random_observable(rng, 3);
        let r = evolve_observable(&w, &sys).in_module("many_body")?;
        rates = rates.worse((r.clock_weighted - r.global).abs() / (1.0 + r.global.abs()));
    }
    let traj = evolve_free(&random_system(rng, 2, 1.5)?, 0.05, 100).in_module("many_body")?;
    let id = generating_identity_residual(&traj).in_module("many_body")?;
    let boosted = ParticleSystem::free(
        vec![
            Particle::free(1.0, Vec3::zeros(), Vec3::new(4.0, 0.0, 0.0)),
            Particle::free(1.0, Vec3::new(1.0, 0.0, 0.0), Vec3::new(3.0, 0.5, 0.0)),
        ],
        UnitSystem::natural(),
    )
    .in_module("many_body")?;
    let fastest = worst(
        boosted
            .per_particle_speeds()
            .in_module("many_body")?
            .iter()
            .map(|s| s.v.norm()),
    );
    Ok(vec![
        Check::new(
            "many_body",
            "Mc^2 and H = Mcb consistency",
            consistency,
            Bound::AtMost(1e-12),
        ),
        Check::new(
            "many_body",
            "clock ratio dual forms",
            clocks,
            Bound::AtMost(1e-12),
        ),
        Check::new(
            "many_body",
            "Poisson algebra residual",
            algebra,
            Bound::AtMost(1e-6),
        ),
        Check::new(
            "many_body",
            "clock-weighted rate vs {W,K}",
            rates,
            Bound::AtMost(1e-6),
        ),
        Check::new(
            "many_body",
            "generating identity / |K tau|",
            id.residual() / id.scale,
            Bound::AtMost(1e-10),
        ),
        Check::new(
            "many_body",
            "boosted pair max |v|/c",
            fastest,
            Bound::Above(1.0),
        ),
    ])
}

fn spectral(rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let params = KernelParameters::new(1.0, 1.0, 1.0).in_module("spectral")?;
    let mut l2 = 0.0f64;
    for width in [2.0, 5.0, 10.0] {
        let sigma = width / params.mu;
        let n = 256;
        let extent = f64::max(20.0, 16.0 * width) / params.mu;
        let psi = RadialGridFunction::from_fn(n, extent / n as f64, |x| {
            (-x * x / (2.0 * sigma * sigma)).exp()
        })
        .in_module("spectral")?;
        let kernel = apply_sqrt_operator(&psi, &params).in_module("spectral")?;
        l2 = l2.worse(kernel.relative_l2_error(&momentum_oracle(&psi, &params)));
    }
    let wave_params = KernelParameters::new(1.3, 0.9, 0.7).in_module("spectral")?;
    let mut plane = 0.0f64;
    for mode in [0usize, 1, 5, 17, 40] {
        let extent = 40.0;
        let k0 = std::f64::consts::TAU * mode as f64 / extent;
        let psi = RadialGridFunction::from_fn(128, extent / 128.0, |x| {
            (k0 * x).cos() + 0.5 * (k0 * x).sin()
        })
        .in_module("spectral")?;
        let out = momentum_oracle(&psi, &wave_params);
        let lambda = wave_params.symbol(k0);
        plane = worst(
            out.values()
                .iter()
                .zip(psi.values())
                .map(|(a, b)| (a - lambda * b).abs() / lambda)
                .chain([plane]),
        );
    }
    let decay = worst(
        [KernelDimension::One, KernelDimension::Three]
            .into_iter()
            .map(|d| kernel_tail_decay(&params, d).map(|l| (l - params.mu).abs() / params.mu))
            .collect::<propertime::Result<Vec<_>>>()
            .in_module("spectral")?,
    );
    let (mut even, mut above_rest, mut above_energy) = (0.0f64, f64::INFINITY, f64::INFINITY);
    for _ in 0..1_000 {
        let m = rng.gen_range(0.1..10.0);
        let c = rng.gen_range(0.5..3.0);
        let mc2 = m * c * c;
        let e = rng.gen_range(-1e3..1e3);
        let k = dirac_to_k_eigenvalue(e, m, c);
        even = even.worse((k - dirac_to_k_eigenvalue(-e, m, c)).abs());
        above_energy = above_energy.least(k - e.abs());
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let free = sign * (mc2 + rng.gen_range(0.0..1e3));
        above_rest = above_rest.least(dirac_to_k_eigenvalue(free, m, c) - mc2);
    }
    Ok(vec![
        Check::new(
            "spectral",
            "kernel vs momentum oracle L2",
            l2,
            Bound::AtMost(1e-3),
        ),
        Check::new(
            "spectral",
            "plane-wave eigenvalue",
            plane,
            Bound::AtMost(1e-12),
        ),
        Check::new("spectral", "tail decay vs mu", decay, Bound::AtMost(0.02)),
        Check::new("spectral", "K(E) - K(-E)", even, Bound::AtMost(0.0)),
        Check::new(
            "spectral",
            "K - mc^2 for |E| >= mc^2",
            above_rest,
            Bound::AtLeast(0.0),
        ),
        Check::new("spectral", "K - |E|", above_energy, Bound::AtLeast(0.0)),
    ])
}

fn redshift(_rng: &mut ChaCha8Rng) -> Result<Vec<Check>, CliError> {
    let u = UnitSystem::natural();
    let r = redshift_z(VelocityInput::Observer(Vec3::new(0.6, 0.0, 0.0)), &u).in_module("units")?;
    let via_u =
        redshift_z(VelocityInput::Proper(Vec3::new(0.0, 0.75, 0.0)), &u).in_module("units")?;
    Ok(vec![
        Check::new(
            "units",
            "z(w = 0.6c) - 1",
            (r.z_observer - 1.0).abs(),
            Bound::AtMost(0.0),
        ),
        Check::new(
            "units",
            "u-path vs w-path ulps",
            (r.ulp_distance + via_u.ulp_distance) as f64,
            Bound::AtMost(0.0),
        ),
    ])
}
