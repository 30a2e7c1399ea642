//! Small fixed-size vector helpers for 2D points, vectors and 2x2 tensors.

use crate::scalar::Real;

pub type Point<T> = [T; 2];
pub type Vec2<T> = [T; 2];
/// Row-major 2x2 matrix; `m[i][j]` is row `i`, column `j`.
pub type Mat2<T> = [[T; 2]; 2];

#[inline]
pub fn add<T: Real>(a: Vec2<T>, b: Vec2<T>) -> Vec2<T> {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub<T: Real>(a: Vec2<T>, b: Vec2<T>) -> Vec2<T> {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale<T: Real>(s: T, a: Vec2<T>) -> Vec2<T> {
    [s * a[0], s * a[1]]
}

#[inline]
pub fn dot<T: Real>(a: Vec2<T>, b: Vec2<T>) -> T {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm<T: Real>(a: Vec2<T>) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn norm_sq<T: Real>(a: Vec2<T>) -> T {
    dot(a, a)
}

/// z-component of the 3D cross product.
#[inline]
pub fn cross<T: Real>(a: Vec2<T>, b: Vec2<T>) -> T {
    a[0] * b[1] - a[1] * b[0]
}

/// Counter-clockwise rotation by 90 degrees: `(x, y) -> (-y, x)`.
#[inline]
pub fn rot90<T: Real>(a: Vec2<T>) -> Vec2<T> {
    [-a[1], a[0]]
}

#[inline]
pub fn dist<T: Real>(a: Point<T>, b: Point<T>) -> T {
    norm(sub(a, b))
}

#[inline]
pub fn midpoint<T: Real>(a: Point<T>, b: Point<T>) -> Point<T> {
    let half = T::lit(0.5);
    [half * (a[0] + b[0]), half * (a[1] + b[1])]
}

#[inline]
pub fn mat_vec<T: Real>(m: &Mat2<T>, v: Vec2<T>) -> Vec2<T> {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

#[inline]
pub fn frobenius_dot<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> T {
    a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
}

/// Signed area of the triangle `(a, b, c)`, positive for counter-clockwise order.
#[inline]
pub fn signed_area<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> T {
    T::lit(0.5) * cross(sub(b, a), sub(c, a))
}

/// Symmetric positive definite 2x2 tensor stored by its inverse, which is what
/// every weak form and residual in the crate needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpdTensor<T> {
    inv: Mat2<T>,
}

impl<T: Real> SpdTensor<T> {
    /// `k * I`.
    pub fn isotropic(k: T) -> Self {
        let z = T::zero();
        let ki = T::one() / k;
        Self { inv: [[ki, z], [z, ki]] }
    }

    /// Builds the tensor from its entries; returns `None` if it is not symmetric
    /// positive definite.
    pub fn from_matrix(k: Mat2<T>) -> Option<Self> {
        let tol = T::epsilon() * T::lit(16.0) * (k[0][1].abs() + k[1][0].abs() + T::one());
        if (k[0][1] - k[1][0]).abs() > tol {
            return None;
        }
        let det = k[0][0] * k[1][1] - k[0][1] * k[1][0];
        if k[0][0] <= T::zero() || det <= T::zero() {
            return None;
        }
        let inv = [[k[1][1] / det, -k[0][1] / det], [-k[1][0] / det, k[0][0] / det]];
        Some(Self { inv })
    }

    pub fn inverse(&self) -> &Mat2<T> {
        &self.inv
    }

    #[inline]
    pub fn apply_inverse(&self, v: Vec2<T>) -> Vec2<T> {
        mat_vec(&self.inv, v)
    }

    /// Smallest eigenvalue of `K^{-1}`, i.e. the constant `C_K` in `w . K^{-1} w >= C_K |w|^2`.
    pub fn coercivity(&self) -> T {
        let [[a, b], [_, d]] = self.inv;
        let half = T::lit(0.5);
        let mean = half * (a + d);
        let radius = (half * half * (a - d) * (a - d) + b * b).sqrt();
        mean - radius
    }
}
