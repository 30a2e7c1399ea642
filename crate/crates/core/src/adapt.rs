//! Solve, estimate, mark and refine.

use std::sync::Arc;

use log::info;

use crate::error::{Error, Result};
use crate::estimator::{estimate, EstimatorField};
use crate::mesh::{CoupledMesh, Subdomain};
use crate::metrics::{effectivity, error_norms, ConvergenceRecord};
use crate::nlsolve::{self, NewtonConfig, SolveReport};
use crate::problems::ProblemDefinition;
use crate::scalar::Real;
use crate::spaces::{CoupledSolution, FeSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinementMode {
    /// Every triangle is red-refined.
    Uniform,
    /// Triangles selected by [`mark`] are refined, followed by the closure.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptConfig<T> {
    pub mode: RefinementMode,
    /// Marking constant, in `(0, 1)`.
    pub c_adt: T,
    /// Maximum number of solved levels.
    pub max_levels: usize,
    /// A level is not solved when its DoF count exceeds this budget.
    pub dof_budget: Option<usize>,
    /// The loop stops once `Theta_BFD` drops to this value.
    pub theta_threshold: Option<T>,
    pub newton: NewtonConfig<T>,
}

impl<T: Real> Default for AdaptConfig<T> {
    fn default() -> Self {
        AdaptConfig {
            mode: RefinementMode::Adaptive,
            c_adt: T::lit(0.8),
            max_levels: 20,
            dof_budget: None,
            theta_threshold: None,
            newton: NewtonConfig::default(),
        }
    }
}

impl<T: Real> AdaptConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_adt > T::zero() && self.c_adt < T::one()) {
            return Err(Error::InvalidArgument(format!("C_adt must lie in (0, 1), got {}", self.c_adt)));
        }
        if self.max_levels == 0 {
            return Err(Error::InvalidArgument("at least one level is required".into()));
        }
        if self.dof_budget == Some(0) {
            return Err(Error::InvalidArgument("DoF budget must be positive".into()));
        }
        self.newton.validate()
    }
}

/// Triangles with `Theta_T >= c_adt * mean(Theta_T)`; empty when every
/// indicator vanishes.
pub fn mark<T: Real>(field: &EstimatorField<T>, c_adt: T) -> Vec<usize> {
    mark_values(&field.locals(), c_adt)
}

/// [`mark`] on raw indicator values.
pub fn mark_values<T: Real>(indicators: &[T], c_adt: T) -> Vec<usize> {
    if indicators.is_empty() {
        return Vec::new();
    }
    let sum: T = indicators.iter().copied().sum();
    if sum.is_zero() {
        return Vec::new();
    }
    let threshold = c_adt * sum / T::of_usize(indicators.len());
    indicators.iter().enumerate().filter(|(_, &v)| v >= threshold).map(|(i, _)| i).collect()
}

/// Why a run stopped.
#[derive(Debug)]
pub enum StopReason {
    LevelCap,
    DofBudget,
    ThetaThreshold,
    /// The estimator vanished, so nothing is marked.
    ZeroEstimator,
    /// A level failed; the history holds every completed level.
    Failed(Error),
}

/// Data of one solved level, passed to the observer.
pub struct LevelSnapshot<'a, T: Real> {
    pub record: &'a ConvergenceRecord<T>,
    pub solution: &'a CoupledSolution<T>,
    pub estimator: &'a EstimatorField<T>,
    pub report: &'a SolveReport<T>,
    /// Triangles marked for the next level (all of them in uniform mode).
    pub marked: &'a [usize],
}

impl<T: Real> LevelSnapshot<'_, T> {
    pub fn mesh(&self) -> &CoupledMesh<T> {
        self.solution.mesh()
    }
}

#[derive(Debug)]
pub struct RunHistory<T> {
    pub records: Vec<ConvergenceRecord<T>>,
    pub stop: StopReason,
}

impl<T> RunHistory<T> {
    pub fn failure(&self) -> Option<&Error> {
        match &self.stop {
            StopReason::Failed(e) => Some(e),
            _ => None,
        }
    }
}

/// Runs the refinement loop, calling `observer` after each solved level.
/// An error returned by the observer stops the run as a failure.
pub fn run<T: Real>(
    problem: &ProblemDefinition<T>,
    config: &AdaptConfig<T>,
    mut observer: impl FnMut(&LevelSnapshot<T>) -> Result<()>,
) -> Result<RunHistory<T>> {
    config.validate()?;
    problem.coefficients.validate()?;
    let mut mesh = problem.initial_mesh()?;
    let mut records: Vec<ConvergenceRecord<T>> = Vec::new();
    let stop = loop {
        let level = records.len();
        let space = Arc::new(FeSpace::new(mesh, &problem.boundary.variant));
        let dof = space.num_dofs();
        if let Some(budget) = config.dof_budget {
            if dof > budget {
                if level == 0 {
                    return Err(Error::InvalidArgument(format!("initial mesh has {dof} DoF, above the budget {budget}")));
                }
                break StopReason::DofBudget;
            }
        }
        let (solution, report) = match nlsolve::solve(&space, &problem.coefficients, &problem.boundary, config.newton) {
            Ok(r) => r,
            Err(e) => break StopReason::Failed(e),
        };
        let field = estimate(&solution, &problem.coefficients, &problem.boundary);
        let m = space.mesh();
        let theta = field.global();
        let errors = problem.exact.as_ref().map(|ex| error_norms(&solution, ex));
        let eff = match errors.map(|e| effectivity(e.total(), theta)) {
            Some(Ok(e)) => Some(e.value),
            Some(Err(e)) => break StopReason::Failed(e),
            None => None,
        };
        let mut record = ConvergenceRecord {
            level,
            dof,
            h_b: m.mesh_size(Subdomain::Brinkman),
            h_d: m.mesh_size(Subdomain::Darcy),
            h_sigma: m.interface_mesh_size(),
            errors,
            rates: None,
            theta,
            theta_rate: None,
            effectivity: eff,
            newton_iterations: report.iterations,
            triangles: m.num_triangles(),
        };
        if let Some(prev) = records.last() {
            record.compute_rates(prev);
        }
        info!(
            "level {level}: {dof} DoF, {} triangles, {} Newton steps, Theta = {theta:e}",
            record.triangles, report.iterations
        );
        let marked: Vec<usize> = match config.mode {
            RefinementMode::Uniform => (0..m.num_triangles()).collect(),
            RefinementMode::Adaptive => mark(&field, config.c_adt),
        };
        let snapshot =
            LevelSnapshot { record: &record, solution: &solution, estimator: &field, report: &report, marked: &marked };
        if let Err(e) = observer(&snapshot) {
            records.push(record);
            break StopReason::Failed(e);
        }
        records.push(record);
        if theta.is_zero() {
            break StopReason::ZeroEstimator;
        }
        if config.theta_threshold.is_some_and(|t| theta <= t) {
            break StopReason::ThetaThreshold;
        }
        if records.len() >= config.max_levels {
            break StopReason::LevelCap;
        }
        let refined = match config.mode {
            RefinementMode::Uniform => m.refine_uniform(),
            RefinementMode::Adaptive => m.refine(&marked),
        };
        mesh = match refined {
            Ok(next) => next,
            Err(e) => break StopReason::Failed(e.into()),
        };
    };
    Ok(RunHistory { records, stop })
}
