//! Mixed finite elements for coupled Brinkman-Forchheimer/Darcy flow with
//! residual a posteriori error estimation and adaptive refinement.
//!
//! All numerical types are generic over the scalar type ([`Real`], implemented
//! for `f32` and `f64`); the `*64` aliases below fix `f64`.

pub mod adapt;
pub mod assembly;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod mesh;
pub mod metrics;
pub mod nlsolve;
pub mod problems;
pub mod quadrature;
pub mod scalar;
pub mod spaces;
pub mod sparse;

pub use error::{Error, MeshError, Result};
pub use mesh::{BoundaryTag, CoupledMesh, DomainLayout, EdgeKind, Subdomain};
pub use scalar::Real;

pub type CoupledMesh64 = CoupledMesh<f64>;
pub type DomainLayout64 = DomainLayout<f64>;
pub type FeSpace64 = spaces::FeSpace<f64>;
pub type CoupledSolution64 = spaces::CoupledSolution<f64>;
pub type ProblemDefinition64 = problems::ProblemDefinition<f64>;
pub type ProblemCoefficients64 = assembly::ProblemCoefficients<f64>;
pub type BoundaryData64 = assembly::BoundaryData<f64>;
pub type EstimatorField64 = estimator::EstimatorField<f64>;
pub type ConvergenceRecord64 = metrics::ConvergenceRecord<f64>;
pub type AdaptConfig64 = adapt::AdaptConfig<f64>;
pub type NewtonConfig64 = nlsolve::NewtonConfig<f64>;
