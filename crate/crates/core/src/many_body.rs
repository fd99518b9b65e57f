//! Many-particle mechanics on a single global clock.
//!
//! For particles with energies `H_i` and momenta `p_i`, the total
//! `H = Σ H_i` and `P = Σ p_i` define an effective mass
//! `Mc² = sqrt(H² − c²P²)` and the global proper time `dτ = (Mc²/H) dt`.
//! The global canonical Hamiltonian is `K = P²/2M + Mc² = H²/(2Mc²) + Mc²/2`.
//!
//! Phase-space observables are plain closures over a [`ParticleSystem`];
//! brackets are evaluated by central differences in the phase vector
//! `(x_1, …, x_n, p_1, …, p_n)` with the convention
//! `{f, g} = Σ ∂f/∂x·∂g/∂p − ∂f/∂p·∂g/∂x`.

use crate::error::{Error, Result};
use crate::units::UnitSystem;
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub m: f64,
    pub x: Vec3,
    pub p: Vec3,
    /// Only used by [`Interaction::Coulomb`].
    pub charge: f64,
}

impl Particle {
    pub fn free(m: f64, x: Vec3, p: Vec3) -> Self {
        Self {
            m,
            x,
            p,
            charge: 0.0,
        }
    }
}

/// Pairwise interaction between the particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interaction {
    #[default]
    None,
    /// `V_ij = e_i e_j / r_ij`, split equally between the two particles.
    Coulomb,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem {
    pub particles: Vec<Particle>,
    pub interaction: Interaction,
    pub units: UnitSystem,
}

impl ParticleSystem {
    pub fn new(
        particles: Vec<Particle>,
        interaction: Interaction,
        units: UnitSystem,
    ) -> Result<Self> {
        if particles.is_empty() {
            return Err(Error::Domain("a system needs at least one particle".into()));
        }
        if let Some(bad) = particles.iter().find(|p| !(p.m > 0.0) || !p.m.is_finite()) {
            return Err(Error::Domain(format!(
                "rest mass must be positive, got {}",
                bad.m
            )));
        }
        Ok(Self {
            particles,
            interaction,
            units,
        })
    }

    pub fn free(particles: Vec<Particle>, units: UnitSystem) -> Result<Self> {
        Self::new(particles, Interaction::None, units)
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// `(x_1, …, x_n, p_1, …, p_n)` flattened.
    pub fn phase(&self) -> Vec<f64> {
        let n = self.len();
        let mut z = vec![0.0; 6 * n];
        for (i, q) in self.particles.iter().enumerate() {
            for k in 0..3 {
                z[3 * i + k] = q.x[k];
                z[3 * n + 3 * i + k] = q.p[k];
            }
        }
        z
    }

    /// Copy of the system at another phase point.
    pub fn with_phase(&self, z: &[f64]) -> Self {
        let n = self.len();
        let mut out = self.clone();
        for (i, q) in out.particles.iter_mut().enumerate() {
            q.x = Vec3::new(z[3 * i], z[3 * i + 1], z[3 * i + 2]);
            q.p = Vec3::new(z[3 * n + 3 * i], z[3 * n + 3 * i + 1], z[3 * n + 3 * i + 2]);
        }
        out
    }

    /// `H_i = sqrt(c²p_i² + m_i²c⁴)` plus half of each pair potential the
    /// particle takes part in.
    pub fn particle_energies(&self) -> Vec<f64> {
        let c = self.units.c();
        let mut h: Vec<f64> = self
            .particles
            .iter()
            .map(|q| c * q.p.norm().hypot(q.m * c))
            .collect();
        if self.interaction == Interaction::Coulomb {
            for i in 0..self.len() {
                for j in i + 1..self.len() {
                    let (a, b) = (&self.particles[i], &self.particles[j]);
                    let v = a.charge * b.charge / (a.x - b.x).norm();
                    h[i] += 0.5 * v;
                    h[j] += 0.5 * v;
                }
            }
        }
        h
    }

    pub fn total_energy(&self) -> f64 {
        self.particle_energies().iter().sum()
    }

    pub fn total_momentum(&self) -> Vec3 {
        self.particles.iter().map(|q| q.p).sum()
    }

    /// `J = Σ x_i × p_i`.
    pub fn angular_momentum(&self) -> Vec3 {
        self.particles.iter().map(|q| q.x.cross(&q.p)).sum()
    }

    /// Boost generator `L = (1/c²) Σ H_i x_i`.
    pub fn boost_generator(&self) -> Vec3 {
        let c2 = self.units.c() * self.units.c();
        self.particles
            .iter()
            .zip(self.particle_energies())
            .map(|(q, h)| q.x * (h / c2))
            .sum()
    }

    /// `M = sqrt(H² − c²P²)/c²`.
    pub fn effective_mass(&self) -> Result<f64> {
        mass_from(self.total_energy(), &self.total_momentum(), &self.units)
    }

    /// `K = P²/2M + Mc²`.
    pub fn canonical_k(&self) -> Result<f64> {
        let m = self.effective_mass()?;
        let c = self.units.c();
        Ok(self.total_momentum().norm_squared() / (2.0 * m) + m * c * c)
    }

    /// Global invariants at this snapshot.
    pub fn invariants(&self) -> Result<GlobalInvariants> {
        let c = self.units.c();
        let h = self.total_energy();
        let p = self.total_momentum();
        let m = mass_from(h, &p, &self.units)?;
        let u = p / m;
        let com = self.center_of_mass()?;
        Ok(GlobalInvariants {
            h,
            p,
            j: self.angular_momentum(),
            l: self.boost_generator(),
            m,
            k: p.norm_squared() / (2.0 * m) + m * c * c,
            u,
            b: c.hypot(u.norm()),
            spin: com.spin,
            x: com.x,
        })
    }

    /// `dτ_i/dτ = H m_i / (M H_i)`.
    pub fn clock_ratio(&self, i: usize) -> Result<f64> {
        let q = self.particle(i)?;
        let h = self.total_energy();
        let m = self.effective_mass()?;
        Ok(h * q.m / (m * self.particle_energies()[i]))
    }

    /// Proper velocities seen on each particle's own clock and on the global
    /// clock.
    pub fn per_particle_speeds(&self) -> Result<Vec<ParticleSpeeds>> {
        let c = self.units.c();
        let m = self.effective_mass()?;
        let b = c.hypot(self.total_momentum().norm() / m);
        self.particles
            .iter()
            .map(|q| {
                let u = q.p / q.m;
                // Inverting u = c v / sqrt(b² − v²) gives v = b u / sqrt(c² + u²).
                let v = u * (b / c.hypot(u.norm()));
                let gap = b * b - v.norm_squared();
                if !(gap > 0.0) {
                    return Err(Error::Domain(format!(
                        "|v_i| = {} is not below b = {b}",
                        v.norm()
                    )));
                }
                Ok(ParticleSpeeds {
                    u,
                    v,
                    b: c * b / gap.sqrt(),
                })
            })
            .collect()
    }

    /// Canonical center of mass `X` and spin `S`.
    ///
    /// `X = X₀ + c²(S × P)/(H(Mc² + H))` with `S = J − X × P`, where
    /// `X₀ = (1/H) Σ H_i x_i`. The implicit pair has the closed-form solution
    /// `X = X₀ + (S₀ × P)/(M(Mc² + H))` with `S₀ = J − X₀ × P`.
    pub fn center_of_mass(&self) -> Result<CenterOfMass> {
        let c2 = self.units.c() * self.units.c();
        let energies = self.particle_energies();
        let h = energies.iter().sum::<f64>();
        let p = self.total_momentum();
        let m = mass_from(h, &p, &self.units)?;
        let x0: Vec3 = self
            .particles
            .iter()
            .zip(&energies)
            .map(|(q, hi)| q.x * *hi)
            .sum::<Vec3>()
            / h;
        let j = self.angular_momentum();
        let s0 = j - x0.cross(&p);
        let x = x0 + s0.cross(&p) / (m * (m * c2 + h));
        Ok(CenterOfMass {
            energy_centroid: x0,
            x,
            spin: j - x.cross(&p),
        })
    }

    fn particle(&self, i: usize) -> Result<&Particle> {
        self.particles.get(i).ok_or_else(|| {
            Error::Domain(format!(
                "particle index {i} out of range for {} particles",
                self.len()
            ))
        })
    }
}

fn mass_from(h: f64, p: &Vec3, units: &UnitSystem) -> Result<f64> {
    let c = units.c();
    let disc = h * h - c * c * p.norm_squared();
    if !(disc >= 0.0) {
        return Err(Error::SpacelikeTotal(disc));
    }
    Ok(disc.sqrt() / (c * c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalInvariants {
    pub h: f64,
    pub p: Vec3,
    pub j: Vec3,
    pub l: Vec3,
    pub m: f64,
    pub k: f64,
    /// `U = P/M`.
    pub u: Vec3,
    /// `b = sqrt(U² + c²)`.
    pub b: f64,
    pub spin: Vec3,
    pub x: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSpeeds {
    /// `u_i = p_i/m_i`, rate on the particle's own clock.
    pub u: Vec3,
    /// Rate on the global clock, `v_i = (b/b_i) u_i`. Not bounded by `c`.
    pub v: Vec3,
    /// `b_i = c b / sqrt(b² − v_i²)`.
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterOfMass {
    /// `X₀ = (1/H) Σ H_i x_i`.
    pub energy_centroid: Vec3,
    pub x: Vec3,
    pub spin: Vec3,
}

/// Central-difference step for phase coordinate `z`.
pub fn bracket_step(z: f64) -> f64 {
    1e-5 * (1.0 + z.abs())
}

/// Gradients of several observables at once; row `k` holds
/// `∂f_k/∂z` over the phase vector.
pub fn phase_gradients<F>(f: F, sys: &ParticleSystem) -> Vec<Vec<f64>>
where
    F: Fn(&ParticleSystem) -> Vec<f64>,
{
    let z0 = sys.phase();
    let n_obs = f(sys).len();
    let mut grads = vec![vec![0.0; z0.len()]; n_obs];
    let mut z = z0.clone();
    for k in 0..z0.len() {
        let h = bracket_step(z0[k]);
        z[k] = z0[k] + h;
        let fp = f(&sys.with_phase(&z));
        z[k] = z0[k] - h;
        let fm = f(&sys.with_phase(&z));
        z[k] = z0[k];
        for (row, (a, b)) in grads.iter_mut().zip(fp.iter().zip(&fm)) {
            row[k] = (a - b) / (2.0 * h);
        }
    }
    grads
}

/// `{f, g}` from precomputed gradients.
pub fn bracket_from_gradients(df: &[f64], dg: &[f64]) -> f64 {
    let half = df.len() / 2;
    (0..half)
        .map(|k| df[k] * dg[half + k] - df[half + k] * dg[k])
        .sum()
}

pub fn poisson_bracket<F, G>(f: F, g: G, sys: &ParticleSystem) -> f64
where
    F: Fn(&ParticleSystem) -> f64,
    G: Fn(&ParticleSystem) -> f64,
{
    let grads = phase_gradients(|s| vec![f(s), g(s)], sys);
    bracket_from_gradients(&grads[0], &grads[1])
}

/// One row of [`verify_algebra`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraResidual {
    pub relation: &'static str,
    pub residual: f64,
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Checks the Poincaré bracket relations at the current phase point and
/// returns the largest absolute residual of each relation.
pub fn verify_algebra(sys: &ParticleSystem) -> Result<Vec<AlgebraResidual>> {
    if sys.interaction != Interaction::None {
        return Err(Error::Domain(
            "the bracket algebra is only checked for free systems".into(),
        ));
    }
    let inv = sys.invariants()?;
    let c2 = sys.units.c() * sys.units.c();
    // Observable layout: P(0..3) J(3..6) L(6..9) H(9) K(10) M(11).
    let obs = |s: &ParticleSystem| -> Vec<f64> {
        let p = s.total_momentum();
        let j = s.angular_momentum();
        let l = s.boost_generator();
        let mass = s.effective_mass().unwrap_or(f64::NAN);
        let k = s.canonical_k().unwrap_or(f64::NAN);
        vec![
            p.x,
            p.y,
            p.z,
            j.x,
            j.y,
            j.z,
            l.x,
            l.y,
            l.z,
            s.total_energy(),
            k,
            mass,
        ]
    };
    let g = phase_gradients(obs, sys);
    let br = |a: usize, b: usize| bracket_from_gradients(&g[a], &g[b]);
    let (p, j, l, h, k, m) = (0, 3, 6, 9, 10, 11);
    let pv = [inv.p.x, inv.p.y, inv.p.z];
    let jv = [inv.j.x, inv.j.y, inv.j.z];
    let lv = [inv.l.x, inv.l.y, inv.l.z];

    let pairwise = |a: usize, b: usize, expected: &dyn Fn(usize, usize) -> f64| {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for jj in 0..3 {
                worst = worst.max((br(a + i, b + jj) - expected(i, jj)).abs());
            }
        }
        worst
    };
    let eps_contract = |v: [f64; 3], scale: f64| {
        move |i: usize, jj: usize| {
            (0..3).map(|kk| levi_civita(i, jj, kk) * v[kk]).sum::<f64>() * scale
        }
    };
    let scalar_vector = |s: usize, v: usize, expected: [f64; 3]| {
        (0..3)
            .map(|i| (br(s, v + i) - expected[i]).abs())
            .fold(0.0, f64::max)
    };
    let kl = inv.h / (inv.m * c2);

    let rows = vec![
        ("{P_i, P_j} = 0", pairwise(p, p, &|_, _| 0.0)),
        (
            "{J_i, P_j} = e_ijk P_k",
            pairwise(j, p, &eps_contract(pv, 1.0)),
        ),
        (
            "{J_i, J_j} = e_ijk J_k",
            pairwise(j, j, &eps_contract(jv, 1.0)),
        ),
        (
            "{J_i, L_j} = e_ijk L_k",
            pairwise(j, l, &eps_contract(lv, 1.0)),
        ),
        (
            "{P_i, L_j} = -d_ij H/c^2",
            pairwise(p, l, &|i, jj| if i == jj { -inv.h / c2 } else { 0.0 }),
        ),
        (
            "{L_i, L_j} = -e_ijk J_k/c^2",
            pairwise(l, l, &eps_contract(jv, -1.0 / c2)),
        ),
        ("{H, P} = 0", scalar_vector(h, p, [0.0; 3])),
        ("{H, J} = 0", scalar_vector(h, j, [0.0; 3])),
        ("{H, L} = -P", scalar_vector(h, l, [-pv[0], -pv[1], -pv[2]])),
        ("{K, P} = 0", scalar_vector(k, p, [0.0; 3])),
        ("{K, J} = 0", scalar_vector(k, j, [0.0; 3])),
        (
            "{K, L} = -(H/Mc^2) P",
            scalar_vector(k, l, [-kl * pv[0], -kl * pv[1], -kl * pv[2]]),
        ),
        ("{M, H} = 0", br(m, h).abs()),
        ("{M, P} = 0", scalar_vector(m, p, [0.0; 3])),
        ("{M, J} = 0", scalar_vector(m, j, [0.0; 3])),
        ("{M, L} = 0", scalar_vector(m, l, [0.0; 3])),
    ];
    Ok(rows
        .into_iter()
        .map(|(relation, residual)| AlgebraResidual { relation, residual })
        .collect())
}

/// Summary of one cluster of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSummary {
    pub members: Vec<usize>,
    pub h: f64,
    pub p: Vec3,
    pub m: f64,
    pub k: f64,
    /// Local clock rate `dτ_k/dt = M_k c²/H_k`.
    pub clock_rate: f64,
}

/// Assigns each cluster its own mass, canonical Hamiltonian and clock. The
/// cluster energies are the sums of the member energies, so they add up to
/// the system total.
pub fn cluster_split(
    sys: &ParticleSystem,
    partition: &[Vec<usize>],
) -> Result<Vec<ClusterSummary>> {
    let n = sys.len();
    let mut seen = vec![false; n];
    for cluster in partition {
        if cluster.is_empty() {
            return Err(Error::Partition("empty cluster".into()));
        }
        for &i in cluster {
            if i >= n {
                return Err(Error::Partition(format!(
                    "index {i} out of range for {n} particles"
                )));
            }
            if seen[i] {
                return Err(Error::Partition(format!(
                    "particle {i} appears in more than one cluster"
                )));
            }
            seen[i] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Partition(format!(
            "particle {missing} is not assigned to a cluster"
        )));
    }
    let c2 = sys.units.c() * sys.units.c();
    let energies = sys.particle_energies();
    partition
        .iter()
        .map(|members| {
            let h: f64 = members.iter().map(|&i| energies[i]).sum();
            let p: Vec3 = members.iter().map(|&i| sys.particles[i].p).sum();
            let m = mass_from(h, &p, &sys.units)?;
            Ok(ClusterSummary {
                members: members.clone(),
                h,
                p,
                m,
                k: p.norm_squared() / (2.0 * m) + m * c2,
                clock_rate: m * c2 / h,
            })
        })
        .collect()
}

/// A snapshot of a system evolving on the global clock.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalSnapshot {
    pub tau: f64,
    /// Observer time, `t = (H/Mc²) τ`.
    pub t: f64,
    pub system: ParticleSystem,
}

/// Exact free evolution under `K`. Momenta are constant and
/// `dx_i/dτ = (H/Mc²) c² p_i / H_i`.
pub fn evolve_free(sys: &ParticleSystem, dtau: f64, n_steps: usize) -> Result<Vec<GlobalSnapshot>> {
    if sys.interaction != Interaction::None {
        return Err(Error::Domain(
            "closed-form evolution needs a free system".into(),
        ));
    }
    let c2 = sys.units.c() * sys.units.c();
    let energies = sys.particle_energies();
    let h: f64 = energies.iter().sum();
    let m = sys.effective_mass()?;
    let rate = h / (m * c2);
    let velocities: Vec<Vec3> = sys
        .particles
        .iter()
        .zip(&energies)
        .map(|(q, hi)| q.p * (rate * c2 / hi))
        .collect();
    Ok((0..=n_steps)
        .map(|step| {
            let tau = step as f64 * dtau;
            let mut s = sys.clone();
            for (q, v) in s.particles.iter_mut().zip(&velocities) {
                q.x += v * tau;
            }
            GlobalSnapshot {
                tau,
                t: rate * tau,
                system: s,
            }
        })
        .collect())
}

/// Both sides of `P·dX − H dt = P·dX − K dτ + dS` with `S = (Mc² − K) τ`,
/// integrated along a trajectory with the trapezoid rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratingIdentity {
    pub lhs: f64,
    pub rhs: f64,
    /// The same identity with `Σ p_i·dx_i` in place of `P·dX`.
    pub lhs_particles: f64,
    pub rhs_particles: f64,
    /// `|K τ|` at the end of the trajectory.
    pub scale: f64,
}

impl GeneratingIdentity {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs)
            .abs()
            .max((self.lhs_particles - self.rhs_particles).abs())
    }
}

pub fn generating_identity_residual(trajectory: &[GlobalSnapshot]) -> Result<GeneratingIdentity> {
    if trajectory.len() < 2 {
        return Err(Error::Grid(
            "a trajectory needs at least two snapshots".into(),
        ));
    }
    struct Point {
        tau: f64,
        t: f64,
        p: Vec3,
        x: Vec3,
        parts: Vec<(Vec3, Vec3)>,
        h: f64,
        k: f64,
        s: f64,
    }
    let points = trajectory
        .iter()
        .map(|snap| {
            let inv = snap.system.invariants()?;
            let c2 = snap.system.units.c() * snap.system.units.c();
            Ok(Point {
                tau: snap.tau,
                t: snap.t,
                p: inv.p,
                x: inv.x,
                parts: snap.system.particles.iter().map(|q| (q.x, q.p)).collect(),
                h: inv.h,
                k: inv.k,
                s: (inv.m * c2 - inv.k) * snap.tau,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let (mut pdx, mut pdx_parts, mut hdt, mut kdtau) = (0.0, 0.0, 0.0, 0.0);
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        pdx += 0.5 * (a.p + b.p).dot(&(b.x - a.x));
        pdx_parts += a
            .parts
            .iter()
            .zip(&b.parts)
            .map(|((xa, pa), (xb, pb))| 0.5 * (pa + pb).dot(&(xb - xa)))
            .sum::<f64>();
        hdt += 0.5 * (a.h + b.h) * (b.t - a.t);
        kdtau += 0.5 * (a.k + b.k) * (b.tau - a.tau);
    }
    let first = &points[0];
    let last = &points[points.len() - 1];
    let ds = last.s - first.s;
    Ok(GeneratingIdentity {
        lhs: pdx - hdt,
        rhs: pdx - kdtau + ds,
        lhs_particles: pdx_parts - hdt,
        rhs_particles: pdx_parts - kdtau + ds,
        scale: (last.k * last.tau).abs(),
    })
}

/// `dW/dτ` two ways: the clock-weighted sum `Σ_i (dτ_i/dτ){W, K_i}` over the
/// single-particle Hamiltonians `K_i = H_i²/(2m_ic²) + m_ic²/2`, and the
/// global bracket `{W, K}`. In both, `M` is held at its value at the phase
/// point, as it is along the flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRate {
    pub clock_weighted: f64,
    pub global: f64,
}

pub fn evolve_observable<W>(w: W, sys: &ParticleSystem) -> Result<ObservableRate>
where
    W: Fn(&ParticleSystem) -> f64,
{
    let n = sys.len();
    let c2 = sys.units.c() * sys.units.c();
    let m_frozen = sys.effective_mass()?;
    let ratios = (0..n)
        .map(|i| sys.clock_ratio(i))
        .collect::<Result<Vec<_>>>()?;
    let masses: Vec<f64> = sys.particles.iter().map(|q| q.m).collect();
    let obs = |s: &ParticleSystem| -> Vec<f64> {
        let energies = s.particle_energies();
        let h: f64 = energies.iter().sum();
        let mut out = Vec::with_capacity(n + 2);
        out.push(w(s));
        out.push(h * h / (2.0 * m_frozen * c2) + 0.5 * m_frozen * c2);
        out.extend(
            energies
                .iter()
                .zip(&masses)
                .map(|(hi, mi)| hi * hi / (2.0 * mi * c2) + 0.5 * mi * c2),
        );
        out
    };
    let g = phase_gradients(obs, sys);
    let clock_weighted = (0..n)
        .map(|i| ratios[i] * bracket_from_gradients(&g[0], &g[2 + i]))
        .sum();
    Ok(ObservableRate {
        clock_weighted,
        global: bracket_from_gradients(&g[0], &g[1]),
    })
}
