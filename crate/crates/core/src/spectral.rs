//! The nonlocal operator `S = sqrt(c²p² + m²c⁴)` in coordinate space.
//!
//! In three dimensions `S` acts through a radial kernel built from modified
//! Bessel functions, `w(d) = −(ħcμ²/2π²) K₂(μd)/d²` with `μ = mc/ħ`, whose
//! `d⁻⁴` singularity at the origin is cancelled by a local counter-term. On a
//! periodic one-dimensional grid the same symbol gives
//!
//! ```text
//! S[ψ](x) = mc² ψ(x) + ∫ ν(d) [ψ(x) − ψ(x + d)] dd,   ν(d) = (ħcμ/π) K₁(μ|d|)/|d|
//! ```
//!
//! The sum over grid offsets excludes the self cell `|d| < h/2`. There `ν`
//! is replaced by its leading term `ħc/(π d²)` and `ψ` by its Taylor
//! expansion, which integrates to `−(ħc h/2π) ψ″(x)`; `ψ″` is taken from a
//! five-point stencil.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::bessel;
use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Periodic images summed on each side when building the kernel table.
pub const KERNEL_IMAGES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParameters {
    pub m: f64,
    pub c: f64,
    pub hbar: f64,
    /// Inverse Compton length `mc/ħ`.
    pub mu: f64,
}

impl KernelParameters {
    pub fn new(m: f64, c: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("c", c), ("hbar", hbar)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            m,
            c,
            hbar,
            mu: m * c / hbar,
        })
    }

    pub fn rest_energy(&self) -> f64 {
        self.m * self.c * self.c
    }

    /// `sqrt(c²ħ²k² + m²c⁴)`.
    pub fn symbol(&self, k: f64) -> f64 {
        self.hbar * self.c * k.hypot(self.mu)
    }
}

/// Samples of a function on the periodic grid `x_i = (i − n/2) h`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGridFunction {
    spacing: f64,
    values: Vec<f64>,
}

impl RadialGridFunction {
    pub fn new(spacing: f64, values: Vec<f64>) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::Grid(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        if values.len() < 5 {
            return Err(Error::Grid(
                "a periodic grid needs at least five points".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Grid("grid values must be finite".into()));
        }
        Ok(Self { spacing, values })
    }

    pub fn from_fn(n: usize, spacing: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = (0..n).map(|i| f(position(i, n, spacing))).collect();
        Self::new(spacing, values)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Period of the grid.
    pub fn extent(&self) -> f64 {
        self.spacing * self.len() as f64
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| position(i, self.len(), self.spacing))
            .collect()
    }

    /// Discrete inner product `h Σ f_i g_i`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.spacing
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// `‖self − other‖ / ‖other‖`.
    pub fn relative_l2_error(&self, reference: &Self) -> f64 {
        let diff: f64 = self
            .values
            .iter()
            .zip(&reference.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (diff * self.spacing).sqrt() / reference.l2_norm()
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            spacing: self.spacing,
            values,
        }
    }
}

fn position(i: usize, n: usize, h: f64) -> f64 {
    (i as f64 - (n / 2) as f64) * h
}

/// Radial kernel weight of `S` in three dimensions at distance `d > 0`:
/// `−(ħcμ²/2π²) (1/d) [K₀(μd)/d + 2K₁(μd)/(μd²)]`.
pub fn sqrt_kernel_weight(d: f64, params: &KernelParameters) -> Result<f64> {
    check_distance(d)?;
    let mu = params.mu;
    let (k0, k1) = bessel::k0_k1(mu * d)?;
    Ok(
        -params.hbar * params.c * mu * mu / (2.0 * PI * PI) / d
            * (k0 / d + 2.0 * k1 / (mu * d * d)),
    )
}

/// One-dimensional kernel weight `−(ħcμ/π) K₁(μd)/d`.
pub fn sqrt_kernel_weight_1d(d: f64, params: &KernelParameters) -> Result<f64> {
    check_distance(d)?;
    Ok(-params.hbar * params.c * params.mu / PI * bessel::k1(params.mu * d)? / d)
}

fn check_distance(d: f64) -> Result<()> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!(
            "kernel distance must be positive, got {d}"
        )));
    }
    Ok(())
}

/// `S[ψ]` by direct summation of the one-dimensional kernel over the
/// periodic grid.
pub fn apply_sqrt_operator(
    psi: &RadialGridFunction,
    params: &KernelParameters,
) -> Result<RadialGridFunction> {
    let h = psi.spacing;
    let resolution = params.mu * h;
    if resolution > 1.0 {
        return Err(Error::Resolution(resolution));
    }
    let n = psi.len();
    let period = psi.extent();
    // density[j] = ν at offset j (1 ≤ j < n), including periodic images.
    let mut density = vec![0.0; n];
    for (j, slot) in density.iter_mut().enumerate().skip(1) {
        let mut sum = 0.0;
        for img in -(KERNEL_IMAGES as i64)..=KERNEL_IMAGES as i64 {
            let d = (j as f64 * h + img as f64 * period).abs();
            sum -= sqrt_kernel_weight_1d(d, params)?;
        }
        *slot = sum;
    }
    let v = &psi.values;
    let at = |i: usize, off: i64| v[(i as i64 + off).rem_euclid(n as i64) as usize];
    let self_cell = params.hbar * params.c * h / (2.0 * PI);
    let out = (0..n)
        .map(|i| {
            let nonlocal: f64 = (1..n)
                .map(|j| density[j] * (v[i] - v[(i + j) % n]))
                .sum::<f64>()
                * h;
            let second = (-at(i, 2) + 16.0 * at(i, 1) - 30.0 * v[i] + 16.0 * at(i, -1) - at(i, -2))
                / (12.0 * h * h);
            params.rest_energy() * v[i] + nonlocal - self_cell * second
        })
        .collect();
    Ok(psi.with_values(out))
}

/// `S[ψ]` by multiplying the discrete Fourier transform with the symbol
/// `sqrt(c²ħ²k² + m²c⁴)`.
pub fn momentum_oracle(psi: &RadialGridFunction, params: &KernelParameters) -> RadialGridFunction {
    let n = psi.len();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex<f64>> = psi.values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    forward.process(&mut buf);
    let dk = 2.0 * PI / psi.extent();
    for (i, z) in buf.iter_mut().enumerate() {
        let index = if i <= n / 2 {
            i as f64
        } else {
            i as f64 - n as f64
        };
        *z *= params.symbol(index * dk);
    }
    inverse.process(&mut buf);
    psi.with_values(buf.iter().map(|z| z.re / n as f64).collect())
}

/// `S[ψ](0)` for the radial Gaussian `ψ(r) = exp(−r²/2σ²)` computed through
/// the three-dimensional kernel and through momentum space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialCenterCheck {
    /// `mc² ψ(0) − ∫ w(r) [ψ(0) − ψ(r)] 4πr² dr`.
    pub kernel: f64,
    /// `(1/2π²) ∫ k² sqrt(c²ħ²k² + m²c⁴) ψ̂(k) dk`.
    pub momentum: f64,
}

impl RadialCenterCheck {
    pub fn relative_difference(&self) -> f64 {
        ((self.kernel - self.momentum) / self.momentum).abs()
    }
}

pub fn radial_center_check(sigma: f64, params: &KernelParameters) -> Result<RadialCenterCheck> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "width must be positive, got {sigma}"
        )));
    }
    let mu = params.mu;
    let integrand = |r: f64| {
        let w = sqrt_kernel_weight(r, params).unwrap_or(0.0);
        let drop = -(-r * r / (2.0 * sigma * sigma)).exp_m1();
        -w * drop * 4.0 * PI * r * r
    };
    // Piecewise over the kernel and Gaussian length scales; the integrand
    // tends to a finite limit at r = 0.
    let mut breaks = vec![
        1e-9 / mu,
        0.1 / mu,
        1.0 / mu,
        0.25 * sigma,
        sigma,
        3.0 * sigma,
    ];
    breaks.push(breaks.iter().cloned().fold(0.0, f64::max) + 60.0 / mu);
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    let kernel_part: f64 = breaks
        .windows(2)
        .map(|w| adaptive_simpson(&integrand, w[0], w[1], 1e-14))
        .sum();

    let norm = (2.0 * PI * sigma * sigma).powf(1.5);
    let spectrum = |k: f64| k * k * params.symbol(k) * norm * (-0.5 * sigma * sigma * k * k).exp();
    let kmax = 14.0 / sigma;
    let momentum = (0..8)
        .map(|i| {
            let a = kmax * i as f64 / 8.0;
            adaptive_simpson(&spectrum, a, a + kmax / 8.0, 1e-14)
        })
        .sum::<f64>()
        / (2.0 * PI * PI);

    Ok(RadialCenterCheck {
        kernel: params.rest_energy() + kernel_part,
        momentum,
    })
}

/// Eigenvalue of the canonical proper-time Hamiltonian belonging to an
/// energy eigenvalue `E`: `E²/(2mc²) + mc²/2`.
pub fn dirac_to_k_eigenvalue(energy: f64, m: f64, c: f64) -> f64 {
    let mc2 = m * c * c;
    energy * energy / (2.0 * mc2) + 0.5 * mc2
}

/// Which kernel a tail fit samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelDimension {
    One,
    Three,
}

/// Exponential decay constant of `|w(d)|` on `[d_lo, d_hi]`, fitted by least
/// squares to `ln|w| = −λd + α ln d + β/d + const`. The power and `1/d`
/// terms absorb the algebraic prefactor of the Bessel asymptotics.
pub fn fit_decay_constant(d: &[f64], w: &[f64]) -> Result<f64> {
    if d.len() != w.len() || d.len() < 5 {
        return Err(Error::Grid(
            "decay fit needs at least five matching samples".into(),
        ));
    }
    if d.iter()
        .zip(w)
        .any(|(&x, &y)| !(x > 0.0) || y == 0.0 || !y.is_finite())
    {
        return Err(Error::Grid(
            "decay fit needs positive distances and non-zero weights".into(),
        ));
    }
    let a = DMatrix::from_fn(d.len(), 4, |i, j| match j {
        0 => -d[i],
        1 => d[i].ln(),
        2 => 1.0 / d[i],
        _ => 1.0,
    });
    let y = DVector::from_iterator(w.len(), w.iter().map(|v| v.abs().ln()));
    let coef = a
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::Grid(format!("decay fit failed: {e}")))?;
    Ok(coef[0])
}

/// Tail decay constant of a kernel over `d ∈ [3/μ, 8/μ]`.
pub fn kernel_tail_decay(params: &KernelParameters, dimension: KernelDimension) -> Result<f64> {
    let samples = 200;
    let (lo, hi) = (3.0 / params.mu, 8.0 / params.mu);
    let d: Vec<f64> = (0..samples)
        .map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64)
        .collect();
    let w = d
        .iter()
        .map(|&x| match dimension {
            KernelDimension::One => sqrt_kernel_weight_1d(x, params),
            KernelDimension::Three => sqrt_kernel_weight(x, params),
        })
        .collect::<Result<Vec<_>>>()?;
    fit_decay_constant(&d, &w)
}
