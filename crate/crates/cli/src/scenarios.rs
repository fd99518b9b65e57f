//! Scenario runners. Each takes a validated configuration and returns a
//! [`ResultTable`]; every number in the table comes from a library call.

use propertime::dynamics::{integrate_orbit, OrbitMode, PhaseState};
use propertime::fields::evaluate_fields;
use propertime::group::{BoostParameters, SourceDensities};
use propertime::many_body::{
    evolve_free, generating_identity_residual, verify_algebra, Particle, ParticleSystem,
};
use propertime::potential::{Coulomb, FieldConfiguration, FreeField, Superposed, UniformMagnetic};
use propertime::spectral::{
    apply_sqrt_operator, kernel_tail_decay, momentum_oracle, KernelDimension, KernelParameters,
    RadialGridFunction,
};
use propertime::trajectory::{
    CircularMotion, SourceTrajectory, StaticCharge, UniformAcceleration, UniformMotion,
};
use propertime::{UnitSystem, Vec3};

use crate::config::Config;
use crate::constants::{MUON_LIFETIME_S, SPEED_OF_LIGHT_SI};
use crate::error::{CliError, InModule};
use crate::table::ResultTable;

/// Names of the scenario subcommands.
pub const SCENARIOS: [&str; 8] = [
    "transform",
    "fields",
    "orbit",
    "nbody",
    "spectral",
    "redshift",
    "muon",
    "rest-source",
];

pub fn run(
    name: &str,
    cfg: &Config,
    units: &UnitSystem,
    parallel: bool,
) -> Result<ResultTable, CliError> {
    match name {
        "transform" => transform(cfg, units),
        "fields" => fields(cfg, units, parallel),
        "orbit" => orbit(cfg, units),
        "nbody" => nbody(cfg, units),
        "spectral" => spectral(cfg, units),
        "redshift" => redshift(cfg, units),
        "muon" => muon(cfg, units),
        "rest-source" => rest_source(cfg, units),
        other => Err(CliError::Config(format!("unknown scenario `{other}`"))),
    }
}

fn xyz(prefix: &str) -> [String; 3] {
    ["x", "y", "z"].map(|c| format!("{prefix}_{c}"))
}

fn columns(groups: &[&[String]]) -> Vec<String> {
    groups.iter().flat_map(|g| g.iter().cloned()).collect()
}

fn scalar(name: &str) -> [String; 1] {
    [name.to_string()]
}

/// Boosts a source event, its proper velocity, acceleration and densities
/// into the frame moving at `v`.
pub fn transform(cfg: &Config, units: &UnitSystem) -> Result<ResultTable, CliError> {
    cfg.validate("transform", &["v", "u", "a", "x", "tau", "rho"])?;
    let v = cfg.vec3("v")?;
    let u = cfg.vec3("u")?;
    let a = cfg.vec3_or("a", Vec3::zeros())?;
    let tau = cfg.positive_or("tau", 1.0)?;
    let x = cfg.vec3_or("x", u * tau)?;
    let rho = cfg.number_or("rho", 1.0)?;

    let boost = BoostParameters::new(v, units).in_module("group")?;
    let b = units.collaborative_speed(&u);
    // Mean light speed of a uniform worldline from the origin.
    let b_bar = b;
    let u_p = boost.boost_velocity(&u);
    let b_p = boost.boost_lightspeed(b, &u);
    let a_p = boost.boost_acceleration(&a, &u);
    let x_p = boost.boost_event(&x, tau, b_bar).in_module("group")?;
    let b_bar_p = boost.boost_mean_lightspeed(&x, tau, b_bar);
    let w_p = units.observer_from_proper(&u_p);
    let sources = boost.boost_sources(&SourceDensities::convective(rho, u, units));

    let back_u = boost.unboost_velocity(&u_p);
    let back_x = boost.unboost_event(&x_p, tau, b_bar_p).in_module("group")?;
    let roundtrip = ((back_u - u).norm() / u.norm().max(units.c()))
        .max((back_x - x).norm() / x.norm().max(units.c()));

    let mut t = ResultTable::new(&columns(&[
        &scalar("gamma"),
        &scalar("b"),
        &scalar("b_prime"),
        &xyz("u_prime"),
        &xyz("w_prime"),
        &xyz("a_prime"),
        &xyz("x_prime"),
        &scalar("b_bar_prime"),
        &scalar("rho_prime"),
        &xyz("j_prime"),
        &scalar("mass_shell_residual"),
        &scalar("roundtrip_residual"),
    ]));
    let shell = (b_p * b_p - (units.c() * units.c() + u_p.norm_squared())).abs() / (b_p * b_p);
    let mut row = vec![boost.gamma(), b, b_p];
    for vec in [u_p, w_p, a_p, x_p] {
        row.extend(vec.iter());
    }
    row.extend([b_bar_p, sources.rho]);
    row.extend(sources.current.iter());
    row.extend([shell, roundtrip]);
    t.push(row);
    Ok(t)
}

fn source_from(cfg: &Config) -> Result<(Box<dyn SourceTrajectory>, &'static str), CliError> {
    let kind = cfg.choice("source", &["static", "uniform", "accelerated", "circular"])?;
    let charge = cfg.number_or("charge", 1.0)?;
    let reason = format!("by source `{kind}`");
    let src: Box<dyn SourceTrajectory> = match kind {
        "static" => {
            for k in ["velocity", "acceleration", "radius", "omega", "center"] {
                cfg.forbid(k, &reason)?;
            }
            Box::new(StaticCharge {
                charge,
                position: cfg.vec3_or("origin", Vec3::zeros())?,
            })
        }
        "uniform" => {
            for k in ["acceleration", "radius", "omega", "center"] {
                cfg.forbid(k, &reason)?;
            }
            Box::new(UniformMotion {
                charge,
                origin: cfg.vec3_or("origin", Vec3::zeros())?,
                velocity: cfg.vec3("velocity")?,
            })
        }
        "accelerated" => {
            for k in ["radius", "omega", "center"] {
                cfg.forbid(k, &reason)?;
            }
            Box::new(UniformAcceleration {
                charge,
                origin: cfg.vec3_or("origin", Vec3::zeros())?,
                initial_velocity: cfg.vec3_or("velocity", Vec3::zeros())?,
                acceleration: cfg.vec3("acceleration")?,
            })
        }
        _ => {
            for k in ["velocity", "acceleration", "origin"] {
                cfg.forbid(k, &reason)?;
            }
            Box::new(CircularMotion {
                charge,
                center: cfg.vec3_or("center", Vec3::zeros())?,
                radius: cfg.positive("radius")?,
                omega: cfg.number("omega")?,
            })
        }
    };
    Ok((src, kind))
}

/// Retarded fields along the segment from `start` to `end`.
pub fn fields(cfg: &Config, units: &UnitSystem, parallel: bool) -> Result<ResultTable, CliError> {
    cfg.validate(
        "fields",
        &[
            "source",
            "charge",
            "origin",
            "velocity",
            "acceleration",
            "center",
            "radius",
            "omega",
            "tau",
            "start",
            "end",
            "samples",
        ],
    )?;
    let (src, kind) = source_from(cfg)?;
    let tau = cfg.number_or("tau", 0.0)?;
    let start = cfg.vec3("start")?;
    let end = cfg.vec3_or("end", start)?;
    let samples = cfg.count_or("samples", 1)?;
    let points: Vec<Vec3> = (0..samples)
        .map(|i| {
            let f = if samples == 1 {
                0.0
            } else {
                i as f64 / (samples - 1) as f64
            };
            start + (end - start) * f
        })
        .collect();

    let eval = |x: &Vec3| -> Result<Vec<f64>, CliError> {
        let (g, terms) = evaluate_fields(x, tau, src.as_ref(), units).in_module("fields")?;
        let e = terms.electric_total();
        let b = terms.magnetic_total();
        let mut row: Vec<f64> = x.iter().copied().collect();
        row.push(g.tau_retarded);
        row.extend(e.iter());
        row.extend(b.iter());
        row.extend(terms.electric.iter().map(|t| t.norm()));
        row.push(e.dot(&b));
        Ok(row)
    };
    let rows: Vec<Result<Vec<f64>, CliError>> = if parallel && points.len() > 1 {
        let workers = std::thread::available_parallelism()
            .map_or(4, |n| n.get())
            .min(points.len());
        let chunk = points.len().div_ceil(workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = points
                .chunks(chunk)
                .map(|part| s.spawn(|| part.iter().map(eval).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("field worker panicked"))
                .collect()
        })
    } else {
        points.iter().map(eval).collect()
    };

    let mut t = ResultTable::new(&columns(&[
        &["x".into(), "y".into(), "z".into()],
        &scalar("tau_retarded"),
        &xyz("e"),
        &xyz("b"),
        &[
            "e_velocity_norm".into(),
            "e_acceleration_norm".into(),
            "e_parallel_norm".into(),
        ],
        &scalar("e_dot_b"),
    ]));
    t.meta("source", kind);
    for row in rows {
        t.push(row?);
    }
    Ok(t)
}

fn field_config(cfg: &Config) -> Result<(Box<dyn FieldConfiguration>, &'static str), CliError> {
    let kind = cfg.choice(
        "potential",
        &["free", "coulomb", "magnetic", "coulomb+magnetic"],
    )?;
    let reason = format!("by potential `{kind}`");
    let coulomb = || -> Result<Coulomb, CliError> {
        Ok(Coulomb {
            strength: cfg.number("strength")?,
            center: cfg.vec3_or("center", Vec3::zeros())?,
        })
    };
    let magnetic = || -> Result<UniformMagnetic, CliError> {
        Ok(UniformMagnetic {
            field: cfg.vec3("field")?,
        })
    };
    let f: Box<dyn FieldConfiguration> = match kind {
        "free" => {
            for k in ["strength", "center", "field"] {
                cfg.forbid(k, &reason)?;
            }
            Box::new(FreeField)
        }
        "coulomb" => {
            cfg.forbid("field", &reason)?;
            Box::new(coulomb()?)
        }
        "magnetic" => {
            cfg.forbid("strength", &reason)?;
            cfg.forbid("center", &reason)?;
            Box::new(magnetic()?)
        }
        _ => Box::new(Superposed(coulomb()?, magnetic()?)),
    };
    Ok((f, kind))
}

/// Single-particle orbit under the canonical proper-time Hamiltonian.
pub fn orbit(cfg: &Config, units: &UnitSystem) -> Result<ResultTable, CliError> {
    cfg.validate(
        "orbit",
        &[
            "x0",
            "p0",
            "mass",
            "charge",
            "potential",
            "strength",
            "center",
            "field",
            "dtau",
            "steps",
            "stride",
            "mode",
        ],
    )?;
    let (fields, kind) = field_config(cfg)?;
    let mode_name = cfg.choice("mode", &["exact", "weak_field"])?;
    let mode = match mode_name {
        "exact" => OrbitMode::Exact,
        _ => OrbitMode::WeakField,
    };
    let s = PhaseState::new(
        cfg.vec3("x0")?,
        cfg.vec3_or("p0", Vec3::zeros())?,
        cfg.positive_or("mass", 1.0)?,
        cfg.number_or("charge", 1.0)?,
    )
    .in_module("dynamics")?;
    let dtau = cfg.positive("dtau")?;
    let steps = cfg.count("steps")?;
    let stride = cfg.count_or("stride", 1)?;
    let orbit =
        integrate_orbit(&s, fields.as_ref(), units, dtau, steps, mode).in_module("dynamics")?;

    let mut t = ResultTable::new(&columns(&[
        &scalar("tau"),
        &["x".into(), "y".into(), "z".into()],
        &xyz("p"),
        &["k".into(), "h".into(), "b".into()],
    ]));
    t.meta("potential", kind);
    t.meta("mode", mode_name);
    t.meta_value("k_drift", orbit.k_drift());
    let center = cfg.vec3_or("center", Vec3::zeros())?;
    t.meta_value("min_radius", orbit.min_radius(&center));
    for (i, q) in orbit.samples.iter().enumerate() {
        if i % stride == 0 || i == orbit.samples.len() - 1 {
            let mut row = vec![q.tau];
            row.extend(q.x.iter());
            row.extend(q.p.iter());
            row.extend([q.k, q.h, q.b]);
            t.push(row);
        }
    }
    Ok(t)
}

fn particles_from(cfg: &Config) -> Result<Vec<Particle>, CliError> {
    let masses = cfg.numbers("masses")?;
    let n = masses.len();
    if n == 0 {
        return Err(CliError::Config("key `masses` must not be empty".into()));
    }
    let triples = |key: &str| -> Result<Vec<Vec3>, CliError> {
        let flat = cfg.numbers(key)?;
        if flat.len() != 3 * n {
            return Err(CliError::Config(format!(
                "key `{key}` must hold 3 numbers per particle ({} for {n} particles), got {}",
                3 * n,
                flat.len()
            )));
        }
        Ok(flat
            .chunks(3)
            .map(|c| Vec3::new(c[0], c[1], c[2]))
            .collect())
    };
    let x = triples("positions")?;
    let p = triples("momenta")?;
    Ok(masses
        .into_iter()
        .zip(x.into_iter().zip(p))
        .map(|(m, (x, p))| Particle::free(m, x, p))
        .collect())
}

/// Free many-particle evolution on the global clock.
pub fn nbody(cfg: &Config, units: &UnitSystem) -> Result<ResultTable, CliError> {
    cfg.validate(
        "nbody",
        &["masses", "positions", "momenta", "dtau", "steps", "stride"],
    )?;
    let sys = ParticleSystem::free(particles_from(cfg)?, *units).in_module("many_body")?;
    let dtau = cfg.positive("dtau")?;
    let steps = cfg.count("steps")?;
    let stride = cfg.count_or("stride", 1)?;
    let traj = evolve_free(&sys, dtau, steps).in_module("many_body")?;

    let n = sys.len();
    let ratio_cols: Vec<String> = (0..n).map(|i| format!("clock_ratio_{i}")).collect();
    let mut t = ResultTable::new(&columns(&[
        &["tau".into(), "t".into(), "h".into()],
        &xyz("p"),
        &["m".into(), "k".into()],
        &xyz("x_cm"),
        &xyz("spin"),
        &ratio_cols,
    ]));
    let algebra = verify_algebra(&sys).in_module("many_body")?;
    let worst = algebra.iter().map(|r| r.residual).fold(0.0, f64::max);
    t.meta_value("algebra_max_residual", worst);
    let identity = generating_identity_residual(&traj).in_module("many_body")?;
    t.meta_value("generating_identity_residual", identity.residual());
    for (i, snap) in traj.iter().enumerate() {
        if i % stride != 0 && i != traj.len() - 1 {
            continue;
        }
        let inv = snap.system.invariants().in_module("many_body")?;
        let mut row = vec![snap.tau, snap.t, inv.h];
        row.extend(inv.p.iter());
        row.extend([inv.m, inv.k]);
        row.extend(inv.x.iter());
        row.extend(inv.spin.iter());
        for i in 0..n {
            row.push(snap.system.clock_ratio(i).in_module("many_body")?);
        }
        t.push(row);
    }
    Ok(t)
}

/// The square-root operator on a Gaussian, by kernel summation and by the
/// momentum-space oracle.
pub fn spectral(cfg: &Config, units: &UnitSystem) -> Result<ResultTable, CliError> {
    cfg.validate("spectral", &["mass", "hbar", "width", "points", "extent"])?;
    let params = KernelParameters::new(
        cfg.positive_or("mass", 1.0)?,
        units.c(),
        cfg.positive_or("hbar", 1.0)?,
    )
    .in_module("spectral")?;
    let width = cfg.positive_or("width", 2.0)?;
    let points = cfg.count_or("points", 256)?;
    let extent = cfg.positive_or("extent", f64::max(20.0, 16.0 * width))?;
    let sigma = width / params.mu;
    let psi = RadialGridFunction::from_fn(points, extent / params.mu / points as f64, |x| {
        (-x * x / (2.0 * sigma * sigma)).exp()
    })
    .in_module("spectral")?;
    let kernel = apply_sqrt_operator(&psi, &params).in_module("spectral")?;
    let oracle = momentum_oracle(&psi, &params);

    let mut t = ResultTable::new(&["x", "psi", "kernel", "oracle"]);
    t.meta_value("mu", params.mu);
    t.meta_value("relative_l2_error", kernel.relative_l2_error(&oracle));
    t.meta_value(
        "tail_decay_1d",
        kernel_tail_decay(&params, KernelDimension::One).in_module("spectral")?,
    );
    t.meta_value(
        "tail_decay_3d",
        kernel_tail_decay(&params, KernelDimension::Three).in_module("spectral")?,
    );
    for (i, x) in psi.positions().into_iter().enumerate() {
        t.push(vec![
            x,
            psi.values()[i],
            kernel.values()[i],
            oracle.values()[i],
        ]);
    }
    Ok(t)
}

/// A source velocity given either as observer velocity or proper velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VelocityInput {
    Observer(Vec3),
    Proper(Vec3),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Redshift {
    /// `|w|/c`.
    pub beta_observer: f64,
    /// `|u|/b`.
    pub beta_proper: f64,
    pub z_observer: f64,
    pub z_proper: f64,
    /// `z ≈ |w|/c` for slow sources.
    pub z_small_speed: f64,
    /// Distance in units in the last place between the two `z` values.
    pub ulp_distance: u64,
}

fn doppler_z(beta: f64) -> f64 {
    ((1.0 + beta) / (1.0 - beta)).sqrt() - 1.0
}

fn ulp_distance(a: f64, b: f64) -> u64 {
    let key = |x: f64| {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    };
    key(a).abs_diff(key(b))
}

/// `z = sqrt((1 + β)/(1 − β)) − 1` with `β = |w|/c` and with `β = |u|/b`.
pub fn redshift_z(input: VelocityInput, units: &UnitSystem) -> propertime::Result<Redshift> {
    let (w, u) = match input {
        VelocityInput::Observer(w) => (w, units.proper_from_observer(&w)?),
        VelocityInput::Proper(u) => (units.observer_from_proper(&u), u),
    };
    let beta_observer = w.norm() / units.c();
    let beta_proper = u.norm() / units.collaborative_speed(&u);
    let z_observer = doppler_z(beta_observer);
    let z_proper = doppler_z(beta_proper);
    Ok(Redshift {
        beta_observer,
        beta_proper,
        z_observer,
        z_proper,
        z_small_speed: beta_observer,
        ulp_distance: ulp_distance(z_observer, z_proper),
    })
}

pub fn redshift(cfg: &Config, units: &UnitSystem) -> Result<ResultTable, CliError> {
    cfg.validate("redshift", &["w", "u"])?;
    let input = match (cfg.has("w"), cfg.has("u")) {
        (true, false) => VelocityInput::Observer(cfg.vec3("w")?),
        (false, true) => VelocityInput::Proper(cfg.vec3("u")?),
        _ => {
            return Err(CliError::Config(
                "exactly one of the keys `w` and `u` is required".into(),
            ))
        }
    };
    let r = redshift_z(input, units).in_module("units")?;
    let mut t = ResultTable::new(&[
        "beta_w",
        "beta_u",
        "z",
        "z_u",
        "z_small_speed",
        "ulp_distance",
    ]);
    t.meta(
        "input",
        match input {
            VelocityInput::Observer(_) => "observer velocity w",
            VelocityInput::Proper(_) => "proper velocity u",
        },
    );
    t.push(vec![
        r.beta_observer,
        r.beta_proper,
        r.z_observer,
        r.z_proper,
        r.z_small_speed,
        r.ulp_distance as f64,
    ]);
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuonReport {
    pub u: f64,
    pub w: f64,
    pub b: f64,
    pub gamma: f64,
    /// `|u| τ_life`: distance covered on the muon's own clock.
    pub proper_range: f64,
    /// `|w| τ_life`: the range if the lifetime were read on the observer clock.
    pub naive_range: f64,
    pub reaches_proper: bool,
    pub reaches_naive: bool,
}

/// Range of a muon with proper speed `u_over_c · c` and rest lifetime
/// `lifetime`, compared with `altitude`.
pub fn scenario_muon(
    lifetime: f64,
    u_over_c: f64,
    altitude: f64,
    units: &UnitSystem,
) -> propertime::Result<MuonReport> {
    if !(lifetime > 0.0 && altitude > 0.0 && u_over_c >= 0.0) {
        return Err(propertime::Error::Domain(format!(
            "lifetime and altitude must be positive and the speed non-negative, got {lifetime}, {altitude}, {u_over_c}"
        )));
    }
    let u = Vec3::new(u_over_c * units.c(), 0.0, 0.0);
    let b = units.collaborative_speed(&u);
    let w = units.observer_from_proper(&u).norm();
    let proper_range = u.x * lifetime;
    let naive_range = w * lifetime;
    Ok(MuonReport {
        u: u.x,
        w,
        b,
        gamma: b / units.c(),
        proper_range,
        naive_range,
        reaches_proper: proper_range >= altitude,
        reaches_naive: naive_range >= altitude,
    })
}

pub fn muon(cfg: &Config, units: &UnitSystem) -> Result<ResultTable, CliError> {
    cfg.validate("muon", &["lifetime", "u_over_c", "altitude"])?;
    let lifetime = if cfg.has("lifetime") || units.c() != SPEED_OF_LIGHT_SI {
        cfg.positive("lifetime")?
    } else {
        MUON_LIFETIME_S
    };
    let u_over_c = cfg.number("u_over_c")?;
    let altitude = cfg.positive("altitude")?;
    let r = scenario_muon(lifetime, u_over_c, altitude, units).in_module("units")?;
    let mut t = ResultTable::new(&[
        "u",
        "w",
        "b",
        "gamma",
        "lifetime",
        "altitude",
        "proper_range",
        "naive_range",
        "reaches_proper",
        "reaches_naive",
    ]);
    t.push(vec![
        r.u,
        r.w,
        r.b,
        r.gamma,
        lifetime,
        altitude,
        r.proper_range,
        r.naive_range,
        f64::from(u8::from(r.reaches_proper)),
        f64::from(u8::from(r.reaches_naive)),
    ]);
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestSource {
    pub gamma: f64,
    pub b_prime: f64,
    pub u_prime: Vec3,
}

/// A source at rest in the unprimed frame seen from a frame moving at `v`.
pub fn scenario_rest_source(v: Vec3, units: &UnitSystem) -> propertime::Result<RestSource> {
    let boost = BoostParameters::new(v, units)?;
    let at_rest = Vec3::zeros();
    Ok(RestSource {
        gamma: boost.gamma(),
        b_prime: boost.boost_lightspeed(units.c(), &at_rest),
        u_prime: boost.boost_velocity(&at_rest),
    })
}

pub fn rest_source(cfg: &Config, units: &UnitSystem) -> Result<ResultTable, CliError> {
    cfg.validate("rest-source", &["v"])?;
    let r = scenario_rest_source(cfg.vec3("v")?, units).in_module("group")?;
    let mut t = ResultTable::new(&columns(&[
        &["gamma".into(), "b_prime".into()],
        &xyz("u_prime"),
        &scalar("u_prime_norm"),
    ]));
    let mut row = vec![r.gamma, r.b_prime];
    row.extend(r.u_prime.iter());
    row.push(r.u_prime.norm());
    t.push(row);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn redshift_examples() {
        let u = UnitSystem::natural();
        let r = redshift_z(VelocityInput::Observer(Vec3::zeros()), &u).unwrap();
        assert_eq!(r.z_observer, 0.0);
        let r = redshift_z(VelocityInput::Observer(Vec3::new(0.6, 0.0, 0.0)), &u).unwrap();
        assert_eq!(r.z_observer, 1.0);
        assert_eq!(r.z_proper, 1.0);
        assert_eq!(r.ulp_distance, 0);
        let r = redshift_z(VelocityInput::Proper(Vec3::new(0.75, 0.0, 0.0)), &u).unwrap();
        assert_eq!(r.z_proper.to_bits(), r.z_observer.to_bits());
        assert!(redshift_z(VelocityInput::Observer(Vec3::new(1.0, 0.0, 0.0)), &u).is_err());
    }

    #[test]
    fn ulp_distance_counts_representable_steps() {
        assert_eq!(ulp_distance(1.0, 1.0), 0);
        assert_eq!(ulp_distance(1.0, f64::from_bits(1.0f64.to_bits() + 3)), 3);
        assert_eq!(ulp_distance(-0.0, 0.0), 0);
    }

    #[test]
    fn muon_examples() {
        let si = UnitSystem::si_lightspeed();
        let r = scenario_muon(2.2e-6, 10.0, 15_000.0, &si).unwrap();
        assert!((r.proper_range - 10.0 * si.c() * 2.2e-6).abs() < 1e-9);
        assert!(!r.reaches_proper);
        assert!(r.naive_range < si.c() * 2.2e-6);
        let still = scenario_muon(2.2e-6, 0.0, 1.0, &si).unwrap();
        assert_eq!(still.proper_range, 0.0);
        assert!(!still.reaches_proper);
    }

    #[test]
    fn rest_source_examples() {
        let u = UnitSystem::natural();
        let r = scenario_rest_source(Vec3::zeros(), &u).unwrap();
        assert_eq!((r.b_prime, r.u_prime), (1.0, Vec3::zeros()));
        let r = scenario_rest_source(Vec3::new(0.6, 0.0, 0.0), &u).unwrap();
        assert!((r.b_prime - 1.25).abs() < 1e-15 && (r.u_prime.norm() - 0.75).abs() < 1e-15);
        let r = scenario_rest_source(Vec3::new(0.0, 0.99, 0.0), &u).unwrap();
        assert!((r.b_prime - 7.088_812_050_083_354).abs() < 1e-12);
        assert!(scenario_rest_source(Vec3::new(1.0, 0.0, 0.0), &u).is_err());
    }
}
