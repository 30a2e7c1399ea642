//! Discrete spaces: Bernardi-Raugel velocity on the Brinkman region, lowest
//! order Raviart-Thomas velocity on the Darcy region, piecewise constant
//! pressure and a continuous piecewise-linear interface multiplier.

mod basis;
mod layout;
mod lift;
mod solution;

pub use basis::{edge_barycentric, ElementGeometry, BUBBLE_FLUX};
pub use layout::{BcVariant, Block, DofLayout};
pub use lift::interpolate_dirichlet;
pub use solution::{CoupledSolution, FeSpace};
