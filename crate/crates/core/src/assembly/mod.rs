//! Assembly of the nonlinear operator, the coupling form, the loads and the
//! Newton Jacobian.

mod coefficients;
mod forms;

pub use coefficients::{
    constant_scalar, constant_vector, forchheimer_derivative, forchheimer_term, BoundaryData, ProblemCoefficients,
    ScalarField, VectorField, FORCHHEIMER_GUARD,
};
pub use forms::{Assembler, ResidualReport};
