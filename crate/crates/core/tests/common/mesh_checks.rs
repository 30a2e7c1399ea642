//! Geometric mesh audits written independently of the mesh module.

use std::collections::HashMap;

use bfd_core::mesh::{CoupledMesh, EdgeKind, Subdomain};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Check;

type P = [f64; 2];

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn on_segment(p: P, a: P, b: P) -> bool {
    let d = [b[0] - a[0], b[1] - a[1]];
    let cross = d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0]);
    let len2 = d[0] * d[0] + d[1] * d[1];
    if cross.abs() > 1e-12 * len2 {
        return false;
    }
    let s = (d[0] * (p[0] - a[0]) + d[1] * (p[1] - a[1])) / len2;
    (-1e-12..=1.0 + 1e-12).contains(&s)
}

/// Reference geometry captured from the initial mesh.
pub struct Reference {
    boundary: Vec<(P, P)>,
    interface: Vec<(P, P)>,
    area: [f64; 2],
    interface_length: f64,
}

impl Reference {
    pub fn of(mesh: &CoupledMesh<f64>) -> Self {
        let mut boundary = Vec::new();
        let mut interface = Vec::new();
        for e in mesh.edges() {
            let seg = (mesh.vertex(e.vertices[0]), mesh.vertex(e.vertices[1]));
            match e.kind {
                EdgeKind::Boundary(..) => boundary.push(seg),
                EdgeKind::Interface => interface.push(seg),
                EdgeKind::Interior(_) => {}
            }
        }
        let area = [Subdomain::Brinkman, Subdomain::Darcy].map(|s| mesh.subdomain_area(s));
        let interface_length = mesh.interface_edges().iter().map(|&e| mesh.edge_length(e)).sum();
        Reference { boundary, interface, area, interface_length }
    }
}

/// Conformity, interface matching, even interface count, positive areas and
/// conservation of subdomain areas and interface length.
pub fn audit(mesh: &CoupledMesh<f64>, reference: &Reference) -> Result<(), String> {
    let verts = mesh.vertices();
    let mut owners: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let [a, b, c] = tri.vertices.map(|v| verts[v]);
        let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
        if !(area > 0.0) {
            return Err(format!("triangle {t} has area {area:e}"));
        }
        for i in 0..3 {
            owners.entry(key(tri.vertices[i], tri.vertices[(i + 1) % 3])).or_default().push(t);
        }
    }
    let mut sigma = 0;
    for (&(a, b), ts) in &owners {
        let (pa, pb) = (verts[a], verts[b]);
        match ts.len() {
            1 => {
                if !reference.boundary.iter().any(|&(p, q)| on_segment(pa, p, q) && on_segment(pb, p, q)) {
                    return Err(format!("edge ({a}, {b}) has one triangle but is not on the boundary"));
                }
            }
            2 => {
                let (s0, s1) = (mesh.triangle(ts[0]).subdomain, mesh.triangle(ts[1]).subdomain);
                if s0 != s1 {
                    sigma += 1;
                    if !reference.interface.iter().any(|&(p, q)| on_segment(pa, p, q) && on_segment(pb, p, q)) {
                        return Err(format!("edge ({a}, {b}) separates subdomains off the interface"));
                    }
                }
            }
            n => return Err(format!("edge ({a}, {b}) shared by {n} triangles")),
        }
    }
    if sigma % 2 != 0 {
        return Err(format!("{sigma} interface edges"));
    }
    if sigma != mesh.interface_edges().len() || mesh.interface_pairs().len() * 2 != sigma {
        return Err("interface bookkeeping disagrees with the triangle adjacency".into());
    }
    for m in mesh.interface_pairs() {
        let [e0, e1] = m.edges;
        let shared = mesh.edge(e0).vertices.iter().filter(|v| mesh.edge(e1).vertices.contains(v)).count();
        if shared != 1 {
            return Err(format!("macro-edge ({e0}, {e1}) is not a pair of adjacent edges"));
        }
    }
    for (k, sub) in [Subdomain::Brinkman, Subdomain::Darcy].into_iter().enumerate() {
        let area = mesh.subdomain_area(sub);
        if (area - reference.area[k]).abs() > 1e-12 * reference.area[k].max(1.0) {
            return Err(format!("{sub:?} area changed to {area}"));
        }
    }
    let len: f64 = mesh.interface_edges().iter().map(|&e| mesh.edge_length(e)).sum();
    if (len - reference.interface_length).abs() > 1e-12 {
        return Err(format!("interface length changed to {len}"));
    }
    mesh.check_invariants().map_err(|e| e.to_string())
}

/// Random adaptive marking and refinement cycles on `mesh`.
pub fn random_cycles(mesh: CoupledMesh<f64>, seed: u64, cycles: usize, max_fraction: f64) -> Check {
    let reference = Reference::of(&mesh);
    audit(&mesh, &reference)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mesh = mesh;
    for cycle in 0..cycles {
        let n = mesh.num_triangles();
        let count = rng.gen_range(1..=((n as f64 * max_fraction).ceil() as usize).max(1));
        let marked: Vec<usize> = (0..count).map(|_| rng.gen_range(0..n)).collect();
        mesh = mesh.refine(&marked).map_err(|e| format!("cycle {cycle}: {e}"))?;
        audit(&mesh, &reference).map_err(|e| format!("cycle {cycle}: {e}"))?;
    }
    Ok(format!("{cycles} cycles, final mesh {} triangles", mesh.num_triangles()))
}
