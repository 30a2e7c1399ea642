//! Plain-text and legacy VTK output.

use std::io::{self, Write};

use super::CoupledMesh;
use crate::scalar::Real;

/// Per-triangle data attached to a VTK export.
#[derive(Debug, Default, Clone)]
pub struct CellFields {
    pub scalars: Vec<(String, Vec<f64>)>,
    pub vectors: Vec<(String, Vec<[f64; 2]>)>,
}

impl CellFields {
    pub fn scalar(mut self, name: &str, values: Vec<f64>) -> Self {
        self.scalars.push((name.to_string(), values));
        self
    }

    pub fn vector(mut self, name: &str, values: Vec<[f64; 2]>) -> Self {
        self.vectors.push((name.to_string(), values));
        self
    }
}

impl<T: Real> CoupledMesh<T> {
    /// Writes vertices, triangles and classified edges as plain text.
    /// Coordinates carry 17 significant digits so that a round trip through
    /// the file is exact in double precision.
    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# coupled mesh")?;
        writeln!(w, "vertices {}", self.vertices.len())?;
        for p in &self.vertices {
            writeln!(w, "{:.16e} {:.16e}", p[0].to_f64_lossy(), p[1].to_f64_lossy())?;
        }
        writeln!(w, "triangles {}", self.triangles.len())?;
        for t in &self.triangles {
            let [a, b, c] = t.vertices;
            writeln!(w, "{a} {b} {c} {}", t.subdomain.short_name())?;
        }
        writeln!(w, "edges {}", self.edges.len())?;
        for e in &self.edges {
            writeln!(w, "{} {} {}", e.vertices[0], e.vertices[1], e.kind.label())?;
        }
        writeln!(w, "interface {}", self.interface_edges.len())?;
        for m in &self.interface_pairs {
            writeln!(w, "{} {}", m.edges[0], m.edges[1])?;
        }
        Ok(())
    }

    /// Writes a legacy ASCII VTK unstructured grid with a `subdomain` cell
    /// field followed by `fields`.
    pub fn write_vtk<W: Write>(&self, mut w: W, title: &str, fields: &CellFields) -> io::Result<()> {
        let nt = self.triangles.len();
        writeln!(w, "# vtk DataFile Version 3.0")?;
        writeln!(w, "{title}")?;
        writeln!(w, "ASCII")?;
        writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
        writeln!(w, "POINTS {} double", self.vertices.len())?;
        for p in &self.vertices {
            writeln!(w, "{:.16e} {:.16e} 0", p[0].to_f64_lossy(), p[1].to_f64_lossy())?;
        }
        writeln!(w, "CELLS {nt} {}", 4 * nt)?;
        for t in &self.triangles {
            let [a, b, c] = t.vertices;
            writeln!(w, "3 {a} {b} {c}")?;
        }
        writeln!(w, "CELL_TYPES {nt}")?;
        for _ in 0..nt {
            writeln!(w, "5")?;
        }
        writeln!(w, "CELL_DATA {nt}")?;
        writeln!(w, "SCALARS subdomain int 1")?;
        writeln!(w, "LOOKUP_TABLE default")?;
        for t in &self.triangles {
            let id = match t.subdomain {
                super::Subdomain::Brinkman => 0,
                super::Subdomain::Darcy => 1,
            };
            writeln!(w, "{id}")?;
        }
        for (name, vals) in &fields.scalars {
            writeln!(w, "SCALARS {name} double 1")?;
            writeln!(w, "LOOKUP_TABLE default")?;
            for v in vals {
                writeln!(w, "{v:.16e}")?;
            }
        }
        for (name, vals) in &fields.vectors {
            writeln!(w, "VECTORS {name} double")?;
            for v in vals {
                writeln!(w, "{:.16e} {:.16e} 0", v[0], v[1])?;
            }
        }
        Ok(())
    }
}
