//! Errors against exact solutions, experimental rates and effectivity.

use crate::error::{Error, Result};
use crate::geometry::{self, Point};
use crate::mesh::Subdomain;
use crate::problems::ExactSolution;
use crate::quadrature::{LineRule, TriangleRule};
use crate::scalar::Real;
use crate::spaces::CoupledSolution;

/// The five error measures, plus the two interface norms entering `e(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms<T> {
    /// `|u_B - u_B,h|_{1,Omega_B}`.
    pub u_b: T,
    /// `|u_D - u_D,h|_{div,Omega_D}`.
    pub u_d: T,
    pub p_b: T,
    pub p_d: T,
    /// `sqrt(|.|_0 |.|_1)` on the interface.
    pub lambda: T,
    pub lambda_l2: T,
    pub lambda_h1: T,
}

impl<T: Real> ErrorNorms<T> {
    /// `e(sigma)`: the plain sum of the five errors.
    pub fn total(&self) -> T {
        self.u_b + self.u_d + self.p_b + self.p_d + self.lambda
    }
}

/// Quadrature degree 12 in the volume and 7 Gauss points on edges.
pub fn error_norms<T: Real>(sol: &CoupledSolution<T>, exact: &ExactSolution<T>) -> ErrorNorms<T> {
    let mesh = sol.mesh();
    let space = sol.space();
    let vol = TriangleRule::<T>::collapsed_gauss(7);
    let line = LineRule::<T>::gauss(7);
    let (mut ub, mut ud, mut pb, mut pd) = (T::zero(), T::zero(), T::zero(), T::zero());
    for t in 0..mesh.num_triangles() {
        let geom = space.geometry(t);
        let sub = mesh.triangle(t).subdomain;
        let ph = sol.p(t);
        for (b, &w) in vol.points.iter().zip(&vol.weights) {
            let bary = &mesh.canonical_barycentric(t, *b);
            let w = w * geom.area;
            let x = geom.point(*bary);
            let dp = (exact.p)(x) - ph;
            match sub {
                Subdomain::Brinkman => {
                    let (uh, gh) = sol.u_b(t, *bary);
                    let du = geometry::sub((exact.u_b)(x), uh);
                    let g = (exact.grad_u_b)(x);
                    let mut gsq = T::zero();
                    for a in 0..2 {
                        for b in 0..2 {
                            let d = g[a][b] - gh[a][b];
                            gsq += d * d;
                        }
                    }
                    ub += w * (geometry::norm_sq(du) + gsq);
                    pb += w * dp * dp;
                }
                Subdomain::Darcy => {
                    let du = geometry::sub((exact.u_d)(x), sol.u_d(t, x));
                    let ddiv = (exact.div_u_d)(x) - sol.div_u_d(t);
                    ud += w * (geometry::norm_sq(du) + ddiv * ddiv);
                    pd += w * dp * dp;
                }
            }
        }
    }
    let (mut l0, mut l1) = (T::zero(), T::zero());
    for &e in mesh.interface_edges() {
        let [a, b] = mesh.edge_endpoints(e);
        let tan = mesh.edge_tangent(e);
        let len = mesh.edge_length(e);
        for (&s, &w) in line.points.iter().zip(&line.weights) {
            let w = w * len;
            let x: Point<T> = geometry::add(a, geometry::scale(s, geometry::sub(b, a)));
            let (lh, dlh) = sol.lambda(e, s);
            let d = (exact.p)(x) - lh;
            let dd = geometry::dot((exact.grad_p)(x), tan) - dlh;
            l0 += w * d * d;
            l1 += w * dd * dd;
        }
    }
    let lambda_l2 = l0.sqrt();
    let lambda_h1 = (l0 + l1).sqrt();
    ErrorNorms {
        u_b: ub.sqrt(),
        u_d: ud.sqrt(),
        p_b: pb.sqrt(),
        p_d: pd.sqrt(),
        lambda: (lambda_l2 * lambda_h1).sqrt(),
        lambda_l2,
        lambda_h1,
    }
}

/// Experimental rate `-2 log(e / e') / log(DoF / DoF')`.
pub fn rate<T: Real>(e: T, e_prev: T, dof: usize, dof_prev: usize) -> Result<T> {
    if !(e > T::zero() && e_prev > T::zero()) || dof == 0 || dof_prev == 0 {
        return Err(Error::InvalidArgument("rate needs positive errors and DoF counts".into()));
    }
    if dof == dof_prev {
        return Err(Error::InvalidArgument("rate needs two different DoF counts".into()));
    }
    Ok(-T::lit(2.0) * (e / e_prev).ln() / (T::of_usize(dof) / T::of_usize(dof_prev)).ln())
}

/// Effectivity `e(sigma) / Theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Effectivity<T> {
    pub value: T,
    /// Set when both the error and the estimator vanish (reported as 1).
    pub exact_solution: bool,
}

pub fn effectivity<T: Real>(total_error: T, theta: T) -> Result<Effectivity<T>> {
    if theta > T::zero() {
        Ok(Effectivity { value: total_error / theta, exact_solution: false })
    } else if total_error.is_zero() {
        Ok(Effectivity { value: T::one(), exact_solution: true })
    } else {
        Err(Error::Estimator(format!("estimator vanishes while the error is {total_error}")))
    }
}

/// Everything reported for one level of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord<T> {
    pub level: usize,
    pub dof: usize,
    pub h_b: T,
    pub h_d: T,
    pub h_sigma: T,
    pub errors: Option<ErrorNorms<T>>,
    /// Rates of `u_B, p_B, u_D, p_D, lambda, total` relative to the previous level.
    pub rates: Option<[T; 6]>,
    pub theta: T,
    pub theta_rate: Option<T>,
    pub effectivity: Option<T>,
    pub newton_iterations: usize,
    pub triangles: usize,
}

impl<T: Real> ConvergenceRecord<T> {
    /// Fills in the rates relative to `prev`.
    pub fn compute_rates(&mut self, prev: &ConvergenceRecord<T>) {
        if let (Some(e), Some(p)) = (self.errors, prev.errors) {
            let pairs = [(e.u_b, p.u_b), (e.p_b, p.p_b), (e.u_d, p.u_d), (e.p_d, p.p_d), (e.lambda, p.lambda), (e.total(), p.total())];
            let mut out = [T::nan(); 6];
            for (o, (a, b)) in out.iter_mut().zip(pairs) {
                *o = rate(a, b, self.dof, prev.dof).unwrap_or(T::nan());
            }
            self.rates = Some(out);
        }
        self.theta_rate = rate(self.theta, prev.theta, self.dof, prev.dof).ok();
    }
}
