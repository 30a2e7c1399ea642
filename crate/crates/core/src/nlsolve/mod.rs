//! Newton iteration on the coupled saddle-point system.

mod linear;

use std::sync::Arc;

use log::{debug, warn};

pub use linear::{linear_step, LinearStats};

use crate::assembly::{Assembler, BoundaryData, ProblemCoefficients, ResidualReport};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::scalar::Real;
use crate::spaces::{interpolate_dirichlet, CoupledSolution, FeSpace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig<T> {
    /// Tolerance on `|x_{m+1} - x_m| / |x_{m+1}|`.
    pub tol: T,
    pub max_iter: usize,
    /// Initial value of the free Brinkman vertex velocities.
    pub initial_velocity: Vec2<T>,
    /// Pressure-mean penalty weight before scaling by the domain area.
    pub penalty: T,
}

impl<T: Real> Default for NewtonConfig<T> {
    fn default() -> Self {
        NewtonConfig { tol: T::lit(1e-6), max_iter: 25, initial_velocity: [T::lit(0.1), T::zero()], penalty: T::lit(1e8) }
    }
}

impl<T: Real> NewtonConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidArgument("Newton tolerance must be positive".into()));
        }
        if !(self.penalty > T::zero()) {
            return Err(Error::InvalidArgument("penalty weight must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    /// Number of Newton steps (linear solves) taken.
    pub iterations: usize,
    /// Relative increment after each step.
    pub increments: Vec<T>,
    /// Residual functionals of the returned solution.
    pub residual: ResidualReport<T>,
    /// Statistics of every linear solve.
    pub linear: Vec<LinearStats>,
    pub line_search_used: bool,
}

fn norm<T: Real>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Pressure-mean penalty `gamma m m^T` acting on the pressure block.
#[derive(Debug, Clone)]
pub struct Penalty<T> {
    /// Triangle areas on the pressure rows, zero elsewhere.
    pub m: Vec<T>,
    pub gamma: T,
}

impl<T: Real> Penalty<T> {
    pub fn new(space: &FeSpace<T>, weight: T) -> Self {
        let mut m = vec![T::zero(); space.num_dofs()];
        let mesh = space.mesh();
        for t in 0..mesh.num_triangles() {
            m[space.layout().pressure_dof(t)] = mesh.area(t);
        }
        Penalty { m, gamma: weight / mesh.total_area() }
    }

    fn mean(&self, x: &[T]) -> T {
        self.m.iter().zip(x).map(|(&a, &b)| a * b).sum()
    }
}

/// The nonlinear discrete problem on one mesh.
pub struct NewtonSolver<'a, T: Real> {
    assembler: Assembler<'a, T>,
    space: Arc<FeSpace<T>>,
    rhs: Vec<T>,
    lift: Vec<T>,
    penalty: Option<Penalty<T>>,
    config: NewtonConfig<T>,
}

impl<'a, T: Real> NewtonSolver<'a, T> {
    pub fn new(
        space: &'a Arc<FeSpace<T>>,
        coeffs: &'a ProblemCoefficients<T>,
        bc: &BoundaryData<T>,
        config: NewtonConfig<T>,
    ) -> Result<Self> {
        coeffs.validate()?;
        config.validate()?;
        let assembler = Assembler::new(space, coeffs);
        let rhs = assembler.assemble_rhs(bc);
        let lift = interpolate_dirichlet(space, &*bc.velocity_b, &*bc.velocity_d);
        let penalty = bc.variant.needs_mean_constraint().then(|| Penalty::new(space, config.penalty));
        Ok(NewtonSolver { assembler, space: space.clone(), rhs, lift, penalty, config })
    }

    pub fn assembler(&self) -> &Assembler<'a, T> {
        &self.assembler
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    /// Initial iterate: boundary data on constrained DOFs, the configured
    /// velocity on free Brinkman vertices, zero elsewhere.
    pub fn initial_guess(&self, velocity: Vec2<T>) -> Vec<T> {
        let layout = self.space.layout();
        let mut x = self.lift.clone();
        for &d in &layout.b_vertex {
            if d != usize::MAX {
                if !layout.constrained[d] {
                    x[d] = velocity[0];
                }
                if !layout.constrained[d + 1] {
                    x[d + 1] = velocity[1];
                }
            }
        }
        x
    }

    /// Residual of the penalised equations at `x`, zero on constrained rows.
    pub fn residual(&self, x: &[T]) -> Vec<T> {
        let mut r = self.assembler.residual(x, &self.rhs);
        if let Some(p) = &self.penalty {
            let s = p.gamma * p.mean(x);
            for (ri, &mi) in r.iter_mut().zip(&p.m) {
                *ri += s * mi;
            }
        }
        for (ri, &c) in r.iter_mut().zip(&self.space.layout().constrained) {
            if c {
                *ri = T::zero();
            }
        }
        r
    }

    fn jacobian(&self, x: &[T]) -> crate::sparse::CsrMatrix<T> {
        let n = self.space.num_dofs();
        let mut trips: Vec<(usize, usize, T)> = self.assembler.linear_operator().triplets().collect();
        trips.extend(self.assembler.forchheimer_jacobian_triplets(x));
        crate::sparse::CsrMatrix::from_triplets(n, n, &trips)
    }

    /// Runs Newton from the configured initial guess.
    pub fn solve(&self) -> Result<(CoupledSolution<T>, SolveReport<T>)> {
        self.solve_from(self.initial_guess(self.config.initial_velocity))
    }

    /// Runs Newton from `x`; constrained entries of `x` are overwritten by the boundary data.
    pub fn solve_from(&self, mut x: Vec<T>) -> Result<(CoupledSolution<T>, SolveReport<T>)> {
        let layout = self.space.layout();
        for (i, &c) in layout.constrained.iter().enumerate() {
            if c {
                x[i] = self.lift[i];
            }
        }
        let mut report = SolveReport {
            iterations: 0,
            increments: Vec::new(),
            residual: self.assembler.residual_functionals(&x, &self.rhs),
            linear: Vec::new(),
            line_search_used: false,
        };
        // With vanishing data the unique solution (strong monotonicity) is zero.
        if self.rhs.iter().all(|v| v.is_zero()) && self.lift.iter().all(|v| v.is_zero()) {
            let zero = vec![T::zero(); x.len()];
            report.residual = self.assembler.residual_functionals(&zero, &self.rhs);
            return Ok((CoupledSolution::new(self.space.clone(), zero), report));
        }
        let mut damped = false;
        for k in 1..=self.config.max_iter {
            let r = self.residual(&x);
            let jac = self.jacobian(&x);
            let (delta, stats) = linear_step(&jac, &layout.constrained, self.penalty.as_ref(), &r)?;
            report.linear.push(stats);
            let h = &report.increments;
            if !damped && h.len() >= 3 && h[h.len() - 1] > h[h.len() - 2] && h[h.len() - 2] > h[h.len() - 3] {
                warn!("Newton increments grew twice in a row; enabling halving line search");
                damped = true;
                report.line_search_used = true;
            }
            let mut alpha = T::one();
            if damped {
                let r0 = norm(&r);
                while alpha > T::lit(1.0 / 1024.0) {
                    let trial: Vec<T> = x.iter().zip(&delta).map(|(&a, &d)| a + alpha * d).collect();
                    if norm(&self.residual(&trial)) < r0 {
                        break;
                    }
                    alpha *= T::lit(0.5);
                }
            }
            for (xi, &d) in x.iter_mut().zip(&delta) {
                *xi += alpha * d;
            }
            let xn = norm(&x);
            let inc = alpha * norm(&delta) / if xn > T::zero() { xn } else { T::one() };
            report.increments.push(inc);
            report.iterations = k;
            debug!("Newton step {k}: relative increment {inc:e}");
            if !inc.is_finite() {
                break;
            }
            if inc <= self.config.tol {
                report.residual = self.assembler.residual_functionals(&x, &self.rhs);
                return Ok((CoupledSolution::new(self.space.clone(), x), report));
            }
        }
        Err(Error::Divergence {
            iterations: report.iterations,
            history: report.increments.iter().map(|v| v.to_f64_lossy()).collect(),
        })
    }
}

/// Solves the discrete problem on `space`.
pub fn solve<T: Real>(
    space: &Arc<FeSpace<T>>,
    coeffs: &ProblemCoefficients<T>,
    bc: &BoundaryData<T>,
    config: NewtonConfig<T>,
) -> Result<(CoupledSolution<T>, SolveReport<T>)> {
    NewtonSolver::new(space, coeffs, bc, config)?.solve()
}

/// `|(p_h, 1)| / |p_h|_0`, zero for a vanishing pressure.
pub fn pressure_mean_ratio<T: Real>(sol: &CoupledSolution<T>) -> T {
    let mesh = sol.mesh();
    let l2 = (0..mesh.num_triangles()).map(|t| sol.p(t) * sol.p(t) * mesh.area(t)).sum::<T>().sqrt();
    if l2 > T::zero() {
        sol.pressure_integral().abs() / l2
    } else {
        T::zero()
    }
}
