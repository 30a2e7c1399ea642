use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{self, Mat2, Point, SpdTensor, Vec2};
use crate::scalar::Real;
use crate::spaces::BcVariant;

pub type ScalarField<T> = Arc<dyn Fn(Point<T>) -> T + Send + Sync>;
pub type VectorField<T> = Arc<dyn Fn(Point<T>) -> Vec2<T> + Send + Sync>;

pub fn constant_scalar<T: Real>(c: T) -> ScalarField<T> {
    Arc::new(move |_| c)
}

pub fn constant_vector<T: Real>(c: Vec2<T>) -> VectorField<T> {
    Arc::new(move |_| c)
}

/// Below this velocity magnitude the Forchheimer term and its derivative are
/// evaluated as zero.
pub const FORCHHEIMER_GUARD: f64 = 1e-12;

/// `F |u|^(rho-2) u`.
pub fn forchheimer_term<T: Real>(f: T, rho: T, u: Vec2<T>) -> Vec2<T> {
    let r = geometry::norm(u);
    if r < T::lit(FORCHHEIMER_GUARD) {
        return [T::zero(); 2];
    }
    geometry::scale(f * r.powf(rho - T::lit(2.0)), u)
}

/// Derivative of [`forchheimer_term`] with respect to `u`:
/// `F (|u|^(rho-2) I + (rho-2) |u|^(rho-4) u u^T)`.
pub fn forchheimer_derivative<T: Real>(f: T, rho: T, u: Vec2<T>) -> Mat2<T> {
    let r = geometry::norm(u);
    if r < T::lit(FORCHHEIMER_GUARD) {
        return [[T::zero(); 2]; 2];
    }
    let a = f * r.powf(rho - T::lit(2.0));
    let b = f * (rho - T::lit(2.0)) * r.powf(rho - T::lit(4.0));
    [[a + b * u[0] * u[0], b * u[0] * u[1]], [b * u[1] * u[0], a + b * u[1] * u[1]]]
}

/// Physical parameters and volume data.
#[derive(Clone)]
pub struct ProblemCoefficients<T> {
    pub mu: T,
    pub forchheimer: T,
    pub rho: T,
    pub k_b: SpdTensor<T>,
    pub k_d: SpdTensor<T>,
    pub f_b: VectorField<T>,
    pub f_d: VectorField<T>,
    pub g_d: ScalarField<T>,
    /// Scalar rotation of `f_D`; finite differences are used when absent.
    pub rot_f_d: Option<ScalarField<T>>,
}

impl<T: Real> ProblemCoefficients<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > T::zero()) {
            return Err(Error::InvalidArgument("viscosity must be positive".into()));
        }
        if !(self.forchheimer >= T::zero()) {
            return Err(Error::InvalidArgument("Forchheimer coefficient must be nonnegative".into()));
        }
        if !(self.rho >= T::lit(3.0) && self.rho <= T::lit(4.0)) {
            return Err(Error::InvalidArgument(format!("exponent rho = {} outside [3, 4]", self.rho)));
        }
        Ok(())
    }

    /// Zero sources with the given parameters.
    pub fn homogeneous(mu: T, forchheimer: T, rho: T, k_b: SpdTensor<T>, k_d: SpdTensor<T>) -> Self {
        ProblemCoefficients {
            mu,
            forchheimer,
            rho,
            k_b,
            k_d,
            f_b: constant_vector([T::zero(); 2]),
            f_d: constant_vector([T::zero(); 2]),
            g_d: constant_scalar(T::zero()),
            rot_f_d: Some(constant_scalar(T::zero())),
        }
    }
}

impl<T: Real> fmt::Debug for ProblemCoefficients<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemCoefficients")
            .field("mu", &self.mu)
            .field("forchheimer", &self.forchheimer)
            .field("rho", &self.rho)
            .field("k_b", &self.k_b)
            .field("k_d", &self.k_d)
            .finish_non_exhaustive()
    }
}

/// Boundary and interface data.
#[derive(Clone)]
pub struct BoundaryData<T> {
    pub variant: BcVariant,
    /// Velocity prescribed on the Dirichlet part of the Brinkman boundary.
    pub velocity_b: VectorField<T>,
    /// Velocity whose normal component is prescribed on the flux part of the
    /// Darcy boundary.
    pub velocity_d: VectorField<T>,
    /// Momentum mismatch `sigma_B n + p_D n` on the interface, when the data
    /// do not satisfy the homogeneous transmission condition.
    pub interface_traction: Option<VectorField<T>>,
    /// Mass mismatch `u_B.n - u_D.n` on the interface.
    pub interface_flux: Option<ScalarField<T>>,
}

impl<T: Real> BoundaryData<T> {
    pub fn homogeneous(variant: BcVariant) -> Self {
        BoundaryData {
            variant,
            velocity_b: constant_vector([T::zero(); 2]),
            velocity_d: constant_vector([T::zero(); 2]),
            interface_traction: None,
            interface_flux: None,
        }
    }
}

impl<T: Real> fmt::Debug for BoundaryData<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryData")
            .field("variant", &self.variant)
            .field("interface_traction", &self.interface_traction.is_some())
            .field("interface_flux", &self.interface_flux.is_some())
            .finish_non_exhaustive()
    }
}
