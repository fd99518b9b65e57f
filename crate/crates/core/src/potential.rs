//! Static external fields: a potential energy `V(x)` and a vector potential
//! `A(x)`.

use nalgebra::Matrix3;

use crate::Vec3;

/// Time-independent external fields acting on a test charge.
///
/// Gradients and the curl fall back to second-order central differences with
/// step [`FieldConfiguration::fd_step`]; implementations with closed forms
/// override them.
pub trait FieldConfiguration: Send + Sync {
    /// Potential energy `V = eΦ`.
    fn potential_energy(&self, x: &Vec3) -> f64;

    fn potential_gradient(&self, x: &Vec3) -> Vec3 {
        let h = self.fd_step();
        Vec3::from_fn(|i, _| {
            let mut xp = *x;
            let mut xm = *x;
            xp[i] += h;
            xm[i] -= h;
            (self.potential_energy(&xp) - self.potential_energy(&xm)) / (2.0 * h)
        })
    }

    fn vector_potential(&self, _x: &Vec3) -> Vec3 {
        Vec3::zeros()
    }

    /// `J[i][j] = ∂A_i/∂x_j`.
    fn vector_potential_jacobian(&self, x: &Vec3) -> Matrix3<f64> {
        let h = self.fd_step();
        let mut jac = Matrix3::zeros();
        for j in 0..3 {
            let mut xp = *x;
            let mut xm = *x;
            xp[j] += h;
            xm[j] -= h;
            let col = (self.vector_potential(&xp) - self.vector_potential(&xm)) / (2.0 * h);
            jac.set_column(j, &col);
        }
        jac
    }

    /// `B = ∇ × A`.
    fn magnetic_field(&self, x: &Vec3) -> Vec3 {
        let j = self.vector_potential_jacobian(x);
        Vec3::new(
            j[(2, 1)] - j[(1, 2)],
            j[(0, 2)] - j[(2, 0)],
            j[(1, 0)] - j[(0, 1)],
        )
    }

    fn fd_step(&self) -> f64 {
        1e-6
    }
}

/// No external field.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FreeField;

impl FieldConfiguration for FreeField {
    fn potential_energy(&self, _x: &Vec3) -> f64 {
        0.0
    }
    fn potential_gradient(&self, _x: &Vec3) -> Vec3 {
        Vec3::zeros()
    }
    fn vector_potential_jacobian(&self, _x: &Vec3) -> Matrix3<f64> {
        Matrix3::zeros()
    }
}

/// `V = −k / |x − center|`; attractive for `k > 0`. For two charges of
/// opposite sign and magnitude `e`, `k = e²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coulomb {
    pub strength: f64,
    pub center: Vec3,
}

impl Coulomb {
    pub fn attractive(strength: f64) -> Self {
        Self {
            strength,
            center: Vec3::zeros(),
        }
    }
}

impl FieldConfiguration for Coulomb {
    fn potential_energy(&self, x: &Vec3) -> f64 {
        -self.strength / (x - self.center).norm()
    }
    fn potential_gradient(&self, x: &Vec3) -> Vec3 {
        let r = x - self.center;
        r * (self.strength / r.norm().powi(3))
    }
    fn vector_potential_jacobian(&self, _x: &Vec3) -> Matrix3<f64> {
        Matrix3::zeros()
    }
}

/// Uniform magnetic field in the symmetric gauge, `A = ½ B × x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformMagnetic {
    pub field: Vec3,
}

impl FieldConfiguration for UniformMagnetic {
    fn potential_energy(&self, _x: &Vec3) -> f64 {
        0.0
    }
    fn potential_gradient(&self, _x: &Vec3) -> Vec3 {
        Vec3::zeros()
    }
    fn vector_potential(&self, x: &Vec3) -> Vec3 {
        self.field.cross(x) * 0.5
    }
    fn vector_potential_jacobian(&self, _x: &Vec3) -> Matrix3<f64> {
        self.field.cross_matrix() * 0.5
    }
    fn magnetic_field(&self, _x: &Vec3) -> Vec3 {
        self.field
    }
}

/// Sum of two configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superposed<F, G>(pub F, pub G);

impl<F: FieldConfiguration, G: FieldConfiguration> FieldConfiguration for Superposed<F, G> {
    fn potential_energy(&self, x: &Vec3) -> f64 {
        self.0.potential_energy(x) + self.1.potential_energy(x)
    }
    fn potential_gradient(&self, x: &Vec3) -> Vec3 {
        self.0.potential_gradient(x) + self.1.potential_gradient(x)
    }
    fn vector_potential(&self, x: &Vec3) -> Vec3 {
        self.0.vector_potential(x) + self.1.vector_potential(x)
    }
    fn vector_potential_jacobian(&self, x: &Vec3) -> Matrix3<f64> {
        self.0.vector_potential_jacobian(x) + self.1.vector_potential_jacobian(x)
    }
    fn magnetic_field(&self, x: &Vec3) -> Vec3 {
        self.0.magnetic_field(x) + self.1.magnetic_field(x)
    }
}
