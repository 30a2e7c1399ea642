//! Structured meshes of unions of axis-aligned rectangles.

use std::collections::HashMap;

use super::refine::{Hierarchy, Leaf};
use super::{edge_key, BoundaryTag, CoupledMesh, Subdomain};
use crate::error::MeshError;
use crate::scalar::Real;

/// A tensor grid of coarse cells, each assigned to a subdomain or left empty.
///
/// Each coarse column `i` is split into `x_subdivisions[i]` fine columns and
/// each coarse row `j` into `y_subdivisions[j]` fine rows; every fine cell is
/// cut into two triangles along its south-west to north-east diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainLayout<T> {
    pub xs: Vec<T>,
    pub ys: Vec<T>,
    /// Row-major, bottom row first: `cells[j * (xs.len() - 1) + i]`.
    pub cells: Vec<Option<Subdomain>>,
    pub x_subdivisions: Vec<usize>,
    pub y_subdivisions: Vec<usize>,
}

impl<T: Real> DomainLayout<T> {
    /// A Brinkman rectangle `[x0, x1] x [y_mid, y1]` stacked on a Darcy
    /// rectangle `[x0, x1] x [y0, y_mid]`, with `nx` fine columns and `ny_d`,
    /// `ny_b` fine rows.
    #[allow(clippy::too_many_arguments)]
    pub fn stacked(x0: T, x1: T, y0: T, y_mid: T, y1: T, nx: usize, ny_d: usize, ny_b: usize) -> Self {
        DomainLayout {
            xs: vec![x0, x1],
            ys: vec![y0, y_mid, y1],
            cells: vec![Some(Subdomain::Darcy), Some(Subdomain::Brinkman)],
            x_subdivisions: vec![nx],
            y_subdivisions: vec![ny_d, ny_b],
        }
    }

    fn validate(&self) -> Result<(), MeshError> {
        let nx = self.xs.len().saturating_sub(1);
        let ny = self.ys.len().saturating_sub(1);
        if nx == 0 || ny == 0 {
            return Err(MeshError::DegenerateLayout("layout needs at least one column and one row".into()));
        }
        if self.xs.windows(2).any(|w| w[1] <= w[0]) || self.ys.windows(2).any(|w| w[1] <= w[0]) {
            return Err(MeshError::DegenerateLayout("grid lines must be strictly increasing".into()));
        }
        if self.cells.len() != nx * ny {
            return Err(MeshError::DegenerateLayout(format!(
                "expected {} cells, found {}",
                nx * ny,
                self.cells.len()
            )));
        }
        if self.x_subdivisions.len() != nx || self.y_subdivisions.len() != ny {
            return Err(MeshError::DegenerateLayout("subdivision counts do not match the grid".into()));
        }
        if self.x_subdivisions.contains(&0) || self.y_subdivisions.contains(&0) {
            return Err(MeshError::ZeroSubdivision("every interval needs at least one subdivision".into()));
        }
        for sub in [Subdomain::Brinkman, Subdomain::Darcy] {
            if !self.cells.contains(&Some(sub)) {
                return Err(MeshError::DegenerateLayout(format!("no {sub:?} cells")));
            }
        }
        Ok(())
    }

    /// Builds the structured coupled mesh.
    pub fn build(&self) -> Result<CoupledMesh<T>, MeshError> {
        self.validate()?;
        let lines = |coarse: &[T], subs: &[usize]| {
            let mut out = Vec::new();
            let mut owner = Vec::new();
            for (i, w) in coarse.windows(2).enumerate() {
                let n = subs[i];
                for k in 0..n {
                    out.push(w[0] + (w[1] - w[0]) * T::of_usize(k) / T::of_usize(n));
                    owner.push(i);
                }
            }
            out.push(*coarse.last().unwrap());
            (out, owner)
        };
        let (gx, col_of) = lines(&self.xs, &self.x_subdivisions);
        let (gy, row_of) = lines(&self.ys, &self.y_subdivisions);
        let ncx = col_of.len();
        let ncy = row_of.len();
        let coarse_nx = self.xs.len() - 1;
        let cell = |i: isize, j: isize| -> Option<Subdomain> {
            if i < 0 || j < 0 || i as usize >= ncx || j as usize >= ncy {
                return None;
            }
            self.cells[row_of[j as usize] * coarse_nx + col_of[i as usize]]
        };

        let mut index = vec![usize::MAX; (ncx + 1) * (ncy + 1)];
        let mut vertices = Vec::new();
        for j in 0..=ncy {
            for i in 0..=ncx {
                let (ii, jj) = (i as isize, j as isize);
                let used = [(ii - 1, jj - 1), (ii, jj - 1), (ii - 1, jj), (ii, jj)]
                    .iter()
                    .any(|&(a, b)| cell(a, b).is_some());
                if used {
                    index[j * (ncx + 1) + i] = vertices.len();
                    vertices.push([gx[i], gy[j]]);
                }
            }
        }
        let vid = |i: usize, j: usize| index[j * (ncx + 1) + i];

        let (xmin, xmax) = (gx[0], gx[ncx]);
        let (ymin, ymax) = (gy[0], gy[ncy]);
        let tag_of = |p: [T; 2], q: [T; 2]| {
            if p[0] == xmin && q[0] == xmin {
                BoundaryTag::Left
            } else if p[0] == xmax && q[0] == xmax {
                BoundaryTag::Right
            } else if p[1] == ymin && q[1] == ymin {
                BoundaryTag::Bottom
            } else if p[1] == ymax && q[1] == ymax {
                BoundaryTag::Top
            } else {
                BoundaryTag::Inner
            }
        };

        let mut leaves = Vec::new();
        let mut tags = HashMap::new();
        for j in 0..ncy {
            for i in 0..ncx {
                let (ii, jj) = (i as isize, j as isize);
                let Some(sub) = cell(ii, jj) else { continue };
                let v00 = vid(i, j);
                let v10 = vid(i + 1, j);
                let v11 = vid(i + 1, j + 1);
                let v01 = vid(i, j + 1);
                leaves.push(Leaf { v: [v00, v10, v11], sub });
                leaves.push(Leaf { v: [v00, v11, v01], sub });
                let sides = [
                    (cell(ii, jj - 1), v00, v10),
                    (cell(ii + 1, jj), v10, v11),
                    (cell(ii, jj + 1), v11, v01),
                    (cell(ii - 1, jj), v01, v00),
                ];
                for (nb, a, b) in sides {
                    if nb.is_none() {
                        tags.insert(edge_key(a, b), tag_of(vertices[a], vertices[b]));
                    }
                }
            }
        }
        let hierarchy = Hierarchy::new(vertices, leaves, tags);
        CoupledMesh::from_hierarchy(hierarchy)
    }
}
