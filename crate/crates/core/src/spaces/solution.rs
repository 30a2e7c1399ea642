//! The discrete product space and functions in it.

use std::sync::Arc;

use super::basis::ElementGeometry;
use super::layout::{BcVariant, DofLayout};
use crate::geometry::{self, Mat2, Point, Vec2};
use crate::mesh::{CoupledMesh, Subdomain};
use crate::scalar::Real;

/// A mesh together with its DOF layout and per-element geometry.
#[derive(Debug, Clone)]
pub struct FeSpace<T> {
    mesh: CoupledMesh<T>,
    layout: DofLayout,
    geometry: Vec<ElementGeometry<T>>,
}

impl<T: Real> FeSpace<T> {
    pub fn new(mesh: CoupledMesh<T>, bc: &BcVariant) -> Self {
        let layout = DofLayout::build(&mesh, bc);
        let geometry = (0..mesh.num_triangles()).map(|t| ElementGeometry::new(&mesh, t)).collect();
        FeSpace { mesh, layout, geometry }
    }

    pub fn mesh(&self) -> &CoupledMesh<T> {
        &self.mesh
    }

    pub fn layout(&self) -> &DofLayout {
        &self.layout
    }

    pub fn geometry(&self, t: usize) -> &ElementGeometry<T> {
        &self.geometry[t]
    }

    pub fn num_dofs(&self) -> usize {
        self.layout.num_dofs()
    }

    /// The two multiplier hat functions that are nonzero on interface edge
    /// `e`, at parameter `s` along the edge: `(dof, value, tangential derivative)`.
    /// The tangential derivative is taken along the fixed edge tangent.
    pub fn multiplier_shapes(&self, e: usize, s: T) -> [(usize, T, T); 2] {
        let (k, pos) = self.layout.sigma_slot[e].expect("interface edge");
        let m = self.mesh.interface_pairs()[k];
        let l0 = self.mesh.edge_length(m.edges[0]);
        let l1 = self.mesh.edge_length(m.edges[1]);
        let total = l0 + l1;
        let first = self.mesh.edge(e).vertices[0];
        let (start, end, offset, len) = if pos == 0 {
            (m.vertices[0], m.vertices[1], T::zero(), l0)
        } else {
            (m.vertices[1], m.vertices[2], l0, l1)
        };
        let local = if first == start { s } else { T::one() - s };
        let w = (offset + local * len) / total;
        let dir = geometry::scale(
            T::one() / len,
            geometry::sub(self.mesh.vertex(end), self.mesh.vertex(start)),
        );
        let slope = geometry::dot(dir, self.mesh.edge_tangent(e)) / total;
        [
            (self.layout.multiplier_dof(k), T::one() - w, -slope),
            (self.layout.multiplier_dof(k + 1), w, slope),
        ]
    }
}

/// Coefficient vector over a [`FeSpace`], partitioned as `(u_B, u_D, p, lambda)`.
#[derive(Debug, Clone)]
pub struct CoupledSolution<T> {
    space: Arc<FeSpace<T>>,
    pub coeffs: Vec<T>,
}

impl<T: Real> CoupledSolution<T> {
    pub fn new(space: Arc<FeSpace<T>>, coeffs: Vec<T>) -> Self {
        assert_eq!(coeffs.len(), space.num_dofs(), "coefficient vector length");
        CoupledSolution { space, coeffs }
    }

    pub fn zeros(space: Arc<FeSpace<T>>) -> Self {
        let n = space.num_dofs();
        CoupledSolution { space, coeffs: vec![T::zero(); n] }
    }

    pub fn space(&self) -> &Arc<FeSpace<T>> {
        &self.space
    }

    pub fn mesh(&self) -> &CoupledMesh<T> {
        self.space.mesh()
    }

    fn br_coeffs(&self, t: usize) -> [T; 9] {
        self.space.layout().local[t].map(|d| self.coeffs[d])
    }

    /// Value and gradient of `u_B` at barycentric point `bary` of Brinkman triangle `t`.
    pub fn u_b(&self, t: usize, bary: [T; 3]) -> (Vec2<T>, Mat2<T>) {
        debug_assert_eq!(self.mesh().triangle(t).subdomain, Subdomain::Brinkman);
        let c = self.br_coeffs(t);
        let (vals, grads) = self.space.geometry(t).br_shapes(bary);
        let z = T::zero();
        let mut u = [z; 2];
        let mut g = [[z; 2]; 2];
        for i in 0..9 {
            for a in 0..2 {
                u[a] += c[i] * vals[i][a];
                for b in 0..2 {
                    g[a][b] += c[i] * grads[i][a][b];
                }
            }
        }
        (u, g)
    }

    pub fn div_u_b(&self, t: usize, bary: [T; 3]) -> T {
        let (_, g) = self.u_b(t, bary);
        g[0][0] + g[1][1]
    }

    /// Constant vector Laplacian of `u_B` on triangle `t`.
    pub fn laplacian_u_b(&self, t: usize) -> Vec2<T> {
        let c = self.br_coeffs(t);
        let geom = self.space.geometry(t);
        let mut out = [T::zero(); 2];
        for i in 0..3 {
            out = geometry::add(out, geometry::scale(c[6 + i], geom.bubble_laplacian(i)));
        }
        out
    }

    /// `u_D` at point `x` of Darcy triangle `t`.
    pub fn u_d(&self, t: usize, x: Point<T>) -> Vec2<T> {
        debug_assert_eq!(self.mesh().triangle(t).subdomain, Subdomain::Darcy);
        let local = self.space.layout().local[t];
        let shapes = self.space.geometry(t).rt_shapes(x);
        let mut u = [T::zero(); 2];
        for i in 0..3 {
            u = geometry::add(u, geometry::scale(self.coeffs[local[i]], shapes[i]));
        }
        u
    }

    pub fn div_u_d(&self, t: usize) -> T {
        let local = self.space.layout().local[t];
        let div = self.space.geometry(t).rt_divergence();
        (0..3).map(|i| self.coeffs[local[i]] * div[i]).sum()
    }

    pub fn p(&self, t: usize) -> T {
        self.coeffs[self.space.layout().pressure_dof(t)]
    }

    /// `lambda_h` and its tangential derivative at parameter `s` of interface edge `e`.
    pub fn lambda(&self, e: usize, s: T) -> (T, T) {
        let shapes = self.space.multiplier_shapes(e, s);
        shapes.iter().fold((T::zero(), T::zero()), |(v, d), &(dof, phi, dphi)| {
            (v + self.coeffs[dof] * phi, d + self.coeffs[dof] * dphi)
        })
    }

    /// Area-weighted pressure integral over the whole domain.
    pub fn pressure_integral(&self) -> T {
        let mesh = self.mesh();
        (0..mesh.num_triangles()).map(|t| self.p(t) * mesh.area(t)).sum()
    }
}
