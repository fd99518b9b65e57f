//! Modified Bessel functions of the second kind, `K₀` and `K₁`.
//!
//! Small arguments use the power series with the logarithmic term; large
//! arguments use Steed's continued fraction for the ratio `K₁/K₀` together
//! with Temme's normalisation series. Both branches reach close to machine
//! precision; the switch sits at `x = 2`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SWITCH: f64 = 2.0;
const MAX_ITER: usize = 10_000;

/// `(K₀(x), K₁(x))` for `x > 0`.
pub fn k0_k1(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Bessel K argument must be positive and finite, got {x}"
        )));
    }
    Ok(if x <= SWITCH {
        series(x)
    } else {
        continued_fraction(x)
    })
}

pub fn k0(x: f64) -> Result<f64> {
    k0_k1(x).map(|(k0, _)| k0)
}

pub fn k1(x: f64) -> Result<f64> {
    k0_k1(x).map(|(_, k1)| k1)
}

/// `K₂(x) = K₀(x) + 2 K₁(x) / x`.
pub fn k2(x: f64) -> Result<f64> {
    k0_k1(x).map(|(k0, k1)| k0 + 2.0 * k1 / x)
}

fn series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // K₀ = −(ln(x/2) + γ) I₀ + Σ q^k/(k!)² H_k
    // K₁ = 1/x + ln(x/2) I₁ − (x/4) Σ q^k/(k!(k+1)!) (H_k + H_{k+1} − 2γ)
    let mut i0 = 0.0;
    let mut i1 = 0.0;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut term0 = 1.0; // q^k / (k!)²
    let mut term1 = 1.0; // q^k / (k!(k+1)!)
    let mut harmonic = 0.0; // H_k
    for k in 0..200 {
        let h_next = harmonic + 1.0 / (k as f64 + 1.0);
        i0 += term0;
        i1 += term1;
        s0 += term0 * harmonic;
        s1 += term1 * (harmonic + h_next - 2.0 * EULER_GAMMA);
        if term0 < 1e-18 * i0 && k > 2 {
            break;
        }
        let kf = k as f64 + 1.0;
        term0 *= q / (kf * kf);
        term1 *= q / (kf * (kf + 1.0));
        harmonic = h_next;
    }
    let i1 = 0.5 * x * i1;
    let k0 = -(log_half + EULER_GAMMA) * i0 + s0;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1;
    (k0, k1)
}

fn continued_fraction(x: f64) -> (f64, f64) {
    // Steed's CF2 for order ν = 0.
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
