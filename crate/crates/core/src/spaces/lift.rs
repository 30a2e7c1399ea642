//! Interpolation of essential boundary data.

use super::basis::BUBBLE_FLUX;
use super::solution::FeSpace;
use crate::geometry::{self, Point, Vec2};
use crate::mesh::{EdgeKind, Subdomain};
use crate::quadrature::LineRule;
use crate::scalar::Real;

/// Coefficient vector that is zero on free DOFs and carries the boundary
/// data on constrained ones.
///
/// Brinkman vertex DOFs take the values of `g_b`; each edge bubble is chosen
/// so that the discrete normal flux through the edge equals that of `g_b`.
/// Raviart-Thomas DOFs on flux edges are the fluxes of `g_d`.
pub fn interpolate_dirichlet<T: Real>(
    space: &FeSpace<T>,
    g_b: &dyn Fn(Point<T>) -> Vec2<T>,
    g_d: &dyn Fn(Point<T>) -> Vec2<T>,
) -> Vec<T> {
    let mesh = space.mesh();
    let layout = space.layout();
    let rule = LineRule::<T>::gauss(5);
    let mut x = vec![T::zero(); layout.num_dofs()];
    let flux = |e: usize, g: &dyn Fn(Point<T>) -> Vec2<T>| -> T {
        let [a, b] = mesh.edge_endpoints(e);
        let n = mesh.edge_normal(e);
        let len = mesh.edge_length(e);
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(&s, &w)| {
                let p = geometry::add(a, geometry::scale(s, geometry::sub(b, a)));
                w * geometry::dot(g(p), n)
            })
            .sum::<T>()
            * len
    };
    for (e, edge) in mesh.edges().iter().enumerate() {
        match edge.kind {
            EdgeKind::Boundary(Subdomain::Brinkman, _) if layout.constrained[layout.b_bubble[e]] => {
                let [va, vb] = edge.vertices;
                let ga = g_b(mesh.vertex(va));
                let gb = g_b(mesh.vertex(vb));
                for (v, g) in [(va, ga), (vb, gb)] {
                    x[layout.b_vertex[v]] = g[0];
                    x[layout.b_vertex[v] + 1] = g[1];
                }
                let len = mesh.edge_length(e);
                let n = mesh.edge_normal(e);
                let linear = len * T::lit(0.5) * geometry::dot(geometry::add(ga, gb), n);
                x[layout.b_bubble[e]] = (flux(e, g_b) - linear) / (len * T::lit(BUBBLE_FLUX));
            }
            EdgeKind::Boundary(Subdomain::Darcy, _) if layout.constrained[layout.d_edge[e]] => {
                x[layout.d_edge[e]] = flux(e, g_d);
            }
            _ => {}
        }
    }
    x
}
