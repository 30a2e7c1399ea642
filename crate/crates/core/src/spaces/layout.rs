//! Global degree-of-freedom numbering.

use crate::mesh::{BoundaryTag, CoupledMesh, EdgeKind, Subdomain};
use crate::scalar::Real;

/// Which boundary conditions are essential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BcVariant {
    /// Velocity Dirichlet data on all of the Brinkman boundary and normal
    /// flux data on all of the Darcy boundary.
    Standard,
    /// Velocity Dirichlet data only on the listed Brinkman boundary parts
    /// (zero traction elsewhere) and flux data only on the listed Darcy
    /// parts (zero pressure elsewhere).
    Alternative { b_dirichlet: Vec<BoundaryTag>, d_flux: Vec<BoundaryTag> },
}

impl BcVariant {
    pub fn is_b_dirichlet(&self, tag: BoundaryTag) -> bool {
        match self {
            BcVariant::Standard => true,
            BcVariant::Alternative { b_dirichlet, .. } => b_dirichlet.contains(&tag),
        }
    }

    pub fn is_d_flux(&self, tag: BoundaryTag) -> bool {
        match self {
            BcVariant::Standard => true,
            BcVariant::Alternative { d_flux, .. } => d_flux.contains(&tag),
        }
    }

    /// Whether the pressure is only determined up to a constant.
    pub fn needs_mean_constraint(&self) -> bool {
        match self {
            BcVariant::Standard => true,
            BcVariant::Alternative { b_dirichlet, d_flux } => {
                let all = [BoundaryTag::Left, BoundaryTag::Right, BoundaryTag::Top, BoundaryTag::Bottom, BoundaryTag::Inner];
                all.iter().all(|t| b_dirichlet.contains(t) && d_flux.contains(t))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    VelocityB,
    VelocityD,
    Pressure,
    Multiplier,
}

/// Numbering `[u_B | u_D | p | lambda]`. Constrained (essential boundary)
/// DOFs stay in the numbering and are flagged in [`DofLayout::constrained`].
#[derive(Debug, Clone)]
pub struct DofLayout {
    pub bc: BcVariant,
    /// Vertex -> index of its x-component DOF (y follows), or `usize::MAX`.
    pub b_vertex: Vec<usize>,
    /// Edge -> Bernardi-Raugel bubble DOF, or `usize::MAX`.
    pub b_bubble: Vec<usize>,
    /// Edge -> Raviart-Thomas DOF, or `usize::MAX`.
    pub d_edge: Vec<usize>,
    /// Triangle -> local-to-global map (9 entries for Brinkman triangles, the
    /// first 3 entries for Darcy triangles).
    pub local: Vec<[usize; 9]>,
    /// Edge -> `(macro-edge index, position 0/1 inside it)` for interface edges.
    pub sigma_slot: Vec<Option<(usize, usize)>>,
    pub constrained: Vec<bool>,
    offsets: [usize; 5],
}

impl DofLayout {
    pub fn build<T: Real>(mesh: &CoupledMesh<T>, bc: &BcVariant) -> Self {
        let nv = mesh.vertices().len();
        let ne = mesh.edges().len();
        let mut b_vertex = vec![usize::MAX; nv];
        let mut b_bubble = vec![usize::MAX; ne];
        let mut d_edge = vec![usize::MAX; ne];

        let mut next = 0;
        for tri in mesh.triangles() {
            if tri.subdomain == Subdomain::Brinkman {
                for &v in &tri.vertices {
                    if b_vertex[v] == usize::MAX {
                        b_vertex[v] = next;
                        next += 2;
                    }
                }
            }
        }
        for (t, tri) in mesh.triangles().iter().enumerate() {
            if tri.subdomain == Subdomain::Brinkman {
                for e in mesh.triangle_edges(t) {
                    if b_bubble[e] == usize::MAX {
                        b_bubble[e] = next;
                        next += 1;
                    }
                }
            }
        }
        let off_d = next;
        for (t, tri) in mesh.triangles().iter().enumerate() {
            if tri.subdomain == Subdomain::Darcy {
                for e in mesh.triangle_edges(t) {
                    if d_edge[e] == usize::MAX {
                        d_edge[e] = next;
                        next += 1;
                    }
                }
            }
        }
        let off_p = next;
        next += mesh.num_triangles();
        let off_l = next;
        let pairs = mesh.interface_pairs();
        // one hat function per macro-edge vertex; none without an interface
        next += if pairs.is_empty() { 0 } else { pairs.len() + 1 };
        let total = next;

        let mut sigma_slot = vec![None; ne];
        for (k, m) in pairs.iter().enumerate() {
            sigma_slot[m.edges[0]] = Some((k, 0));
            sigma_slot[m.edges[1]] = Some((k, 1));
        }

        let mut local = vec![[usize::MAX; 9]; mesh.num_triangles()];
        for (t, tri) in mesh.triangles().iter().enumerate() {
            let edges = mesh.triangle_edges(t);
            match tri.subdomain {
                Subdomain::Brinkman => {
                    for i in 0..3 {
                        let v = b_vertex[tri.vertices[i]];
                        local[t][2 * i] = v;
                        local[t][2 * i + 1] = v + 1;
                        local[t][6 + i] = b_bubble[edges[i]];
                    }
                }
                Subdomain::Darcy => {
                    for i in 0..3 {
                        local[t][i] = d_edge[edges[i]];
                    }
                }
            }
        }

        let mut constrained = vec![false; total];
        for (e, edge) in mesh.edges().iter().enumerate() {
            match edge.kind {
                EdgeKind::Boundary(Subdomain::Brinkman, tag) if bc.is_b_dirichlet(tag) => {}
                EdgeKind::Boundary(Subdomain::Darcy, tag) if bc.is_d_flux(tag) => {}
                _ => continue,
            }
            if let EdgeKind::Boundary(Subdomain::Brinkman, _) = edge.kind {
                for &v in &edge.vertices {
                    constrained[b_vertex[v]] = true;
                    constrained[b_vertex[v] + 1] = true;
                }
                constrained[b_bubble[e]] = true;
            } else {
                constrained[d_edge[e]] = true;
            }
        }

        DofLayout {
            bc: bc.clone(),
            b_vertex,
            b_bubble,
            d_edge,
            local,
            sigma_slot,
            constrained,
            offsets: [0, off_d, off_p, off_l, total],
        }
    }

    /// Total number of degrees of freedom of the product space.
    pub fn num_dofs(&self) -> usize {
        self.offsets[4]
    }

    pub fn range(&self, block: Block) -> std::ops::Range<usize> {
        let i = match block {
            Block::VelocityB => 0,
            Block::VelocityD => 1,
            Block::Pressure => 2,
            Block::Multiplier => 3,
        };
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn pressure_dof(&self, t: usize) -> usize {
        self.offsets[2] + t
    }

    pub fn multiplier_dof(&self, k: usize) -> usize {
        self.offsets[3] + k
    }

    pub fn num_free(&self) -> usize {
        self.constrained.iter().filter(|&&c| !c).count()
    }
}
