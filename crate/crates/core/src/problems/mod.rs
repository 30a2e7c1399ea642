//! The benchmark problems: geometry, parameters, data and exact solutions.

mod examples;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use examples::{example1, example1_with_rho, example2, example2_with_rho, example3, example3_with_rho};

use crate::assembly::{BoundaryData, ProblemCoefficients, ScalarField, VectorField};
use crate::error::{Error, Result};
use crate::geometry::{Mat2, Point};
use crate::mesh::{CoupledMesh, DomainLayout};
use crate::scalar::Real;

pub type MatrixField<T> = Arc<dyn Fn(Point<T>) -> Mat2<T> + Send + Sync>;

/// Closed-form solution used for error measurement. The pressure formula is
/// shared by both subdomains, and the multiplier is its trace on the interface.
#[derive(Clone)]
pub struct ExactSolution<T> {
    pub u_b: VectorField<T>,
    /// `grad[c][k] = d_k u_c`.
    pub grad_u_b: MatrixField<T>,
    pub u_d: VectorField<T>,
    pub div_u_d: ScalarField<T>,
    pub p: ScalarField<T>,
    pub grad_p: VectorField<T>,
}

impl<T> fmt::Debug for ExactSolution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ExactSolution { .. }")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemName {
    Example1,
    Example2,
    Example3,
}

impl ProblemName {
    pub const ALL: [ProblemName; 3] = [ProblemName::Example1, ProblemName::Example2, ProblemName::Example3];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemName::Example1 => "example1",
            ProblemName::Example2 => "example2",
            ProblemName::Example3 => "example3",
        }
    }

    /// Builds the problem, optionally overriding the Forchheimer exponent
    /// (manufactured data are recomputed for the new exponent).
    pub fn build<T: Real>(self, rho: Option<T>) -> ProblemDefinition<T> {
        match (self, rho) {
            (ProblemName::Example1, None) => example1(),
            (ProblemName::Example1, Some(r)) => example1_with_rho(r),
            (ProblemName::Example2, None) => example2(),
            (ProblemName::Example2, Some(r)) => example2_with_rho(r),
            (ProblemName::Example3, None) => example3(),
            (ProblemName::Example3, Some(r)) => example3_with_rho(r),
        }
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown problem '{s}'")))
    }
}

/// Everything needed to set up and assess one run.
#[derive(Clone)]
pub struct ProblemDefinition<T> {
    pub name: String,
    pub layout: DomainLayout<T>,
    pub coefficients: ProblemCoefficients<T>,
    pub boundary: BoundaryData<T>,
    pub exact: Option<ExactSolution<T>>,
}

impl<T: Real> ProblemDefinition<T> {
    pub fn initial_mesh(&self) -> Result<CoupledMesh<T>> {
        Ok(self.layout.build()?)
    }
}

impl<T: Real> fmt::Debug for ProblemDefinition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDefinition")
            .field("name", &self.name)
            .field("layout", &self.layout)
            .field("coefficients", &self.coefficients)
            .field("boundary", &self.boundary)
            .field("exact", &self.exact.is_some())
            .finish()
    }
}
