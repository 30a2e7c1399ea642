//! Local shape functions.

use crate::geometry::{self, Mat2, Point, Vec2};
use crate::mesh::CoupledMesh;
use crate::scalar::Real;

/// `integral_e (eta_j eta_k) ds / |e|` for the edge bubble of edge `e`.
pub const BUBBLE_FLUX: f64 = 1.0 / 6.0;

/// Per-triangle data from which the local shape functions are evaluated.
///
/// Local vertex `i` is opposite local edge `i`. Bernardi-Raugel shapes are
/// ordered `(v0,x) (v0,y) (v1,x) (v1,y) (v2,x) (v2,y)` followed by the three
/// edge bubbles `eta_{i+1} eta_{i+2} n_i`; Raviart-Thomas shapes follow the
/// local edges.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry<T> {
    pub corners: [Point<T>; 3],
    pub area: T,
    pub grad_bary: [Vec2<T>; 3],
    /// Global (fixed) unit normals of the three local edges.
    pub normals: [Vec2<T>; 3],
    /// `+1` where the global edge normal points out of this triangle.
    pub signs: [T; 3],
}

impl<T: Real> ElementGeometry<T> {
    pub fn new(mesh: &CoupledMesh<T>, t: usize) -> Self {
        let corners = mesh.corners(t);
        let area = mesh.area(t);
        let two_area = area + area;
        let grad_bary = std::array::from_fn(|i| {
            let d = geometry::sub(corners[(i + 2) % 3], corners[(i + 1) % 3]);
            geometry::scale(T::one() / two_area, geometry::rot90(d))
        });
        let edges = mesh.triangle_edges(t);
        let normals = edges.map(|e| mesh.edge_normal(e));
        let signs = std::array::from_fn(|i| {
            let out = mesh.outward_normal(t, i);
            if geometry::dot(out, normals[i]) > T::zero() {
                T::one()
            } else {
                -T::one()
            }
        });
        ElementGeometry { corners, area, grad_bary, normals, signs }
    }

    pub fn point(&self, bary: [T; 3]) -> Point<T> {
        let c = &self.corners;
        [
            bary[0] * c[0][0] + bary[1] * c[1][0] + bary[2] * c[2][0],
            bary[0] * c[0][1] + bary[1] * c[1][1] + bary[2] * c[2][1],
        ]
    }

    /// Values and gradients (`g[c][k] = d_k phi_c`) of the nine
    /// Bernardi-Raugel shape functions.
    pub fn br_shapes(&self, bary: [T; 3]) -> ([Vec2<T>; 9], [Mat2<T>; 9]) {
        let z = T::zero();
        let mut vals = [[z; 2]; 9];
        let mut grads = [[[z; 2]; 2]; 9];
        for i in 0..3 {
            let g = self.grad_bary[i];
            vals[2 * i] = [bary[i], z];
            vals[2 * i + 1] = [z, bary[i]];
            grads[2 * i] = [g, [z, z]];
            grads[2 * i + 1] = [[z, z], g];
        }
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let n = self.normals[i];
            let b = bary[j] * bary[k];
            let gb = geometry::add(geometry::scale(bary[j], self.grad_bary[k]), geometry::scale(bary[k], self.grad_bary[j]));
            vals[6 + i] = geometry::scale(b, n);
            grads[6 + i] = [geometry::scale(n[0], gb), geometry::scale(n[1], gb)];
        }
        (vals, grads)
    }

    /// Constant vector Laplacian of bubble `i`; the linear shapes have none.
    pub fn bubble_laplacian(&self, i: usize) -> Vec2<T> {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let s = T::lit(2.0) * geometry::dot(self.grad_bary[j], self.grad_bary[k]);
        geometry::scale(s, self.normals[i])
    }

    /// Values of the three flux-normalised Raviart-Thomas shape functions at `x`.
    pub fn rt_shapes(&self, x: Point<T>) -> [Vec2<T>; 3] {
        let two_area = self.area + self.area;
        std::array::from_fn(|i| geometry::scale(self.signs[i] / two_area, geometry::sub(x, self.corners[i])))
    }

    /// Constant divergences of the Raviart-Thomas shape functions.
    pub fn rt_divergence(&self) -> [T; 3] {
        self.signs.map(|s| s / self.area)
    }
}

/// Barycentric coordinates, in triangle `t`, of the point at parameter `s`
/// along edge `e` (from its first to its second vertex).
pub fn edge_barycentric<T: Real>(mesh: &CoupledMesh<T>, t: usize, e: usize, s: T) -> [T; 3] {
    let i = mesh.local_edge_index(t, e).expect("edge belongs to triangle");
    let tri = mesh.triangle(t).vertices;
    let first = mesh.edge(e).vertices[0];
    let mut b = [T::zero(); 3];
    let (a, c) = ((i + 1) % 3, (i + 2) % 3);
    if tri[a] == first {
        b[a] = T::one() - s;
        b[c] = s;
    } else {
        b[c] = T::one() - s;
        b[a] = s;
    }
    b
}
