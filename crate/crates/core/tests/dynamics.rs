use propertime::dynamics::{
    canonical_k, canonical_k_from_h, canonical_momentum, coulomb_critical_radius, free_energy,
    hamilton_rhs, hamiltonian_h, integrate_orbit, lagrangian, lightspeed_identity,
    propertime_force, OrbitMode, PhaseState,
};
use propertime::potential::{Coulomb, FieldConfiguration, Superposed, UniformMagnetic};
use propertime::units::UnitSystem;
use propertime::Vec3;
use proptest::prelude::*;

fn units() -> UnitSystem {
    UnitSystem::natural()
}

fn vec3(range: std::ops::Range<f64>) -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(range).prop_map(Vec3::from)
}

fn mixed_field() -> Superposed<Coulomb, UniformMagnetic> {
    Superposed(
        Coulomb {
            strength: 0.2,
            center: Vec3::new(0.1, -0.2, 0.05),
        },
        UniformMagnetic {
            field: Vec3::new(0.1, 0.3, -0.5),
        },
    )
}

// Central differences of K in x and p.
fn fd_gradients(s: &PhaseState, f: &dyn FieldConfiguration, h: f64) -> (Vec3, Vec3) {
    let u = units();
    let k = |x: Vec3, p: Vec3| canonical_k(&PhaseState { x, p, ..*s }, f, &u);
    let mut gx = Vec3::zeros();
    let mut gp = Vec3::zeros();
    for i in 0..3 {
        let mut d = Vec3::zeros();
        d[i] = h;
        gx[i] = (k(s.x + d, s.p) - k(s.x - d, s.p)) / (2.0 * h);
        gp[i] = (k(s.x, s.p + d) - k(s.x, s.p - d)) / (2.0 * h);
    }
    (gx, gp)
}

// Canonical bracket {F, G} by central differences.
fn fd_bracket(
    s: &PhaseState,
    f: &dyn Fn(&PhaseState) -> f64,
    g: &dyn Fn(&PhaseState) -> f64,
    h: f64,
) -> f64 {
    let grad = |w: &dyn Fn(&PhaseState) -> f64| {
        let mut gx = Vec3::zeros();
        let mut gp = Vec3::zeros();
        for i in 0..3 {
            let mut d = Vec3::zeros();
            d[i] = h;
            gx[i] = (w(&PhaseState { x: s.x + d, ..*s }) - w(&PhaseState { x: s.x - d, ..*s }))
                / (2.0 * h);
            gp[i] = (w(&PhaseState { p: s.p + d, ..*s }) - w(&PhaseState { p: s.p - d, ..*s }))
                / (2.0 * h);
        }
        (gx, gp)
    };
    let (fx, fp) = grad(f);
    let (gx, gp) = grad(g);
    fx.dot(&gp) - fp.dot(&gx)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn k_forms_agree(x in vec3(-3.0..3.0), p in vec3(-3.0..3.0), m in 0.5f64..3.0) {
        let u = units();
        let f = mixed_field();
        prop_assume!((x - f.0.center).norm() > 0.3);
        let s = PhaseState::new(x, p, m, 0.7).unwrap();
        let h = hamiltonian_h(&s, &f, &u);
        let k = canonical_k_from_h(h, m, &u);
        prop_assert!((canonical_k(&s, &f, &u) - k).abs() <= 1e-12 * k.abs());
    }

    #[test]
    fn free_energy_is_mcb(x in vec3(-3.0..3.0), p in vec3(-3.0..3.0), m in 0.5f64..3.0) {
        let u = units();
        let f = mixed_field();
        prop_assume!((x - f.0.center).norm() > 0.3);
        let s = PhaseState::new(x, p, m, 0.7).unwrap();
        let (h0, mcb) = lightspeed_identity(&s, &f, &u).unwrap();
        prop_assert!((h0 - mcb).abs() <= 1e-12 * h0);
    }

    #[test]
    fn k_bracket_is_scaled_h_bracket(
        x in vec3(-3.0..3.0),
        p in vec3(-2.0..2.0),
        coeffs in prop::array::uniform4(-1.0f64..1.0),
    ) {
        let u = units();
        let f = mixed_field();
        prop_assume!((x - f.0.center).norm() > 0.5);
        let s = PhaseState::new(x, p, 1.3, 0.7).unwrap();
        let w = move |q: &PhaseState| {
            coeffs[0] * q.x.x * q.p.y + coeffs[1] * q.x.norm_squared() + coeffs[2] * q.p.z.powi(3) + coeffs[3] * (q.x.y * q.p.x).sin()
        };
        let kf = |q: &PhaseState| canonical_k(q, &f, &u);
        let hf = |q: &PhaseState| hamiltonian_h(q, &f, &u);
        let lhs = fd_bracket(&s, &kf, &w, 1e-5);
        let rhs = hamiltonian_h(&s, &f, &u) / (s.m * u.c() * u.c()) * fd_bracket(&s, &hf, &w, 1e-5);
        prop_assert!((lhs - rhs).abs() <= 1e-6 * (1.0 + rhs.abs()));
    }
}

#[test]
fn hamilton_rhs_matches_finite_difference_gradient_at_second_order() {
    let u = units();
    let f = mixed_field();
    let s = PhaseState::new(
        Vec3::new(0.9, 0.4, -0.7),
        Vec3::new(0.3, -0.8, 0.5),
        1.2,
        0.7,
    )
    .unwrap();
    let (dx, dp) = hamilton_rhs(&s, &f, &u).unwrap();
    let err = |h: f64| {
        let (gx, gp) = fd_gradients(&s, &f, h);
        ((gp - dx).norm(), (gx + dp).norm())
    };
    let (ex1, ep1) = err(2e-2);
    let (ex2, ep2) = err(1e-2);
    assert!(
        (ex1 / ex2 - 4.0).abs() < 0.2,
        "velocity ratio {}",
        ex1 / ex2
    );
    assert!((ep1 / ep2 - 4.0).abs() < 0.2, "force ratio {}", ep1 / ep2);
    let (gx, gp) = fd_gradients(&s, &f, 1e-4);
    assert!((gp - dx).norm() < 1e-7 && (gx + dp).norm() < 1e-7);
}

#[test]
fn coulomb_orbit_conserves_k() {
    let u = units();
    let f = Coulomb::attractive(0.3);
    let s = PhaseState::new(
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 0.45, 0.1),
        1.0,
        1.0,
    )
    .unwrap();
    let orbit = integrate_orbit(&s, &f, &u, 1e-3, 10_000, OrbitMode::Exact).unwrap();
    assert!(orbit.k_drift() < 1e-8, "drift {}", orbit.k_drift());
    let h0 = orbit.samples[0].h;
    assert!(orbit
        .samples
        .iter()
        .all(|q| (q.h - h0).abs() < 1e-8 * h0.abs()));
}

#[test]
fn critical_radius_is_classical_radius() {
    let u = units();
    for &(m, e) in &[(1.0, 1.0), (2.0, 1.0), (0.3, 0.8), (5.0, 2.5)] {
        let r0 = coulomb_critical_radius(m, e, &u).unwrap();
        let expected = e * e / (m * u.c() * u.c());
        assert!(
            (r0 - expected).abs() < 1e-10 * expected,
            "m = {m}, e = {e}: {r0}"
        );
        let inside = PhaseState::new(Vec3::new(0.5 * r0, 0.0, 0.0), Vec3::zeros(), m, e).unwrap();
        assert!(
            propertime_force(&inside, &Coulomb::attractive(e * e), &u)
                .total()
                .x
                > 0.0
        );
    }
    let si = UnitSystem::si_lightspeed();
    let r0 = coulomb_critical_radius(9.109e-31, 1.0, &si).unwrap();
    let expected = 1.0 / (9.109e-31 * si.c() * si.c());
    assert!((r0 - expected).abs() < 1e-10 * expected);
}

#[test]
fn weak_field_infall_reverses_outside_core() {
    let u = units();
    let (m, e) = (1.0, 1.0);
    let r0 = coulomb_critical_radius(m, e, &u).unwrap();
    let f = Coulomb::attractive(e * e);
    let start = 1.05 * r0;
    let s = PhaseState::new(Vec3::new(start, 0.0, 0.0), Vec3::zeros(), m, e).unwrap();
    let orbit = integrate_orbit(&s, &f, &u, 1e-3, 20_000, OrbitMode::WeakField).unwrap();
    let r_min = orbit.min_radius(&Vec3::zeros());
    // p²/2m + V + V²/(2mc²) is conserved; from rest at r_s it turns at r0/(2 − r0/r_s).
    let turning = r0 / (2.0 - r0 / start);
    assert!(r_min > 0.9 * r0, "minimum radius {r_min}");
    assert!(
        (r_min - turning).abs() < 1e-4 * turning,
        "{r_min} vs {turning}"
    );
    assert!(orbit.samples.iter().all(|q| q.x.x > 0.0));
    let peak = orbit
        .samples
        .iter()
        .map(|q| q.p.norm() / (m * u.c()))
        .fold(0.0, f64::max);
    assert!(peak < 0.5, "peak |p|/mc {peak}");
}

// Newtonian two-body motion m ẍ = −k x/|x|³ by RK4 in coordinate time.
fn newtonian_orbit(x0: Vec3, v0: Vec3, m: f64, k: f64, t_end: f64, n: usize) -> Vec3 {
    let acc = |x: &Vec3| -x * (k / (m * x.norm().powi(3)));
    let dt = t_end / n as f64;
    let (mut x, mut v) = (x0, v0);
    for _ in 0..n {
        let (k1x, k1v) = (v, acc(&x));
        let (k2x, k2v) = (v + k1v * (dt / 2.0), acc(&(x + k1x * (dt / 2.0))));
        let (k3x, k3v) = (v + k2v * (dt / 2.0), acc(&(x + k2x * (dt / 2.0))));
        let (k4x, k4v) = (v + k3v * dt, acc(&(x + k3x * dt)));
        x += (k1x + (k2x + k3x) * 2.0 + k4x) * (dt / 6.0);
        v += (k1v + (k2v + k3v) * 2.0 + k4v) * (dt / 6.0);
    }
    x
}

#[test]
fn slow_coulomb_orbit_matches_newtonian_oracle() {
    let u = units();
    let (m, k) = (1.0, 1.2e-4);
    let f = Coulomb::attractive(k);
    let x0 = Vec3::new(1.0, 0.0, 0.0);
    let p0 = Vec3::new(0.0, 0.01 * m * u.c(), 0.0);
    let s = PhaseState::new(x0, p0, m, 1.0).unwrap();
    let energy = p0.norm_squared() / (2.0 * m) - k;
    let a = -k / (2.0 * energy);
    let period = std::f64::consts::TAU * (m * a.powi(3) / k).sqrt();

    let n = 20_000;
    let newton = newtonian_orbit(x0, p0 / m, m, k, period, n);
    assert!(
        (newton - x0).norm() < 1e-8,
        "oracle does not close: {}",
        (newton - x0).norm()
    );

    // The slow-motion limit of the K flow is Newtonian motion in τ.
    let orbit = integrate_orbit(&s, &f, &u, period / n as f64, n, OrbitMode::Exact).unwrap();
    let end = orbit.last().x;
    let rel = (end - newton).norm() / newton.norm();
    assert!(rel < 1e-4, "relative deviation {rel}");
}

#[test]
fn lagrangian_is_legendre_dual_of_k() {
    let u = units();
    let f = Superposed(
        Coulomb::attractive(0.1),
        UniformMagnetic {
            field: Vec3::new(0.0, 0.0, 0.4),
        },
    );
    let (m, e) = (1.0, 0.8);
    let x = Vec3::new(1.5, -0.5, 0.3);
    let vel = Vec3::new(0.2, 0.35, -0.1);
    let p = canonical_momentum(&x, &vel, m, e, &f, &u).unwrap();
    let s = PhaseState::new(x, p, m, e).unwrap();
    let (dx, _) = hamilton_rhs(&s, &f, &u).unwrap();
    assert!((dx - vel).norm() < 1e-12, "velocity recovered as {dx}");
    let h = 1e-5;
    let mut dl = Vec3::zeros();
    for i in 0..3 {
        let mut d = Vec3::zeros();
        d[i] = h;
        dl[i] = (lagrangian(&x, &(vel + d), m, e, &f, &u).unwrap()
            - lagrangian(&x, &(vel - d), m, e, &f, &u).unwrap())
            / (2.0 * h);
    }
    assert!((dl - p).norm() < 1e-8, "∂L/∂u = {dl}, p = {p}");
    let k = canonical_k(&s, &f, &u);
    let l = lagrangian(&x, &vel, m, e, &f, &u).unwrap();
    assert!(
        (p.dot(&vel) - l - k).abs() < 1e-12 * k,
        "p·u − L = {}, K = {k}",
        p.dot(&vel) - l
    );
    assert!(free_energy(&s, &f, &u) > 0.0);
}
