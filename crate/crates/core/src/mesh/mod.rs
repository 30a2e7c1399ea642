//! Conforming two-subdomain triangulations with a matched interface.
//!
//! A [`CoupledMesh`] is a single conforming triangulation of the whole domain in
//! which every triangle is tagged as belonging to the Brinkman-Forchheimer or
//! to the Darcy region. Because it is one conforming mesh, the two traces on
//! the interface always match. The interface edges are kept as an ordered chain
//! and paired into macro-edges, which carry the piecewise-linear multiplier.

mod export;
mod refine;
mod structured;

use std::collections::HashMap;

use crate::error::MeshError;
use crate::geometry::{self, Point, Vec2};
use crate::scalar::Real;

pub use export::CellFields;
pub use structured::DomainLayout;

/// Minimum interior angle (degrees) that the invariant checker accepts.
pub const MIN_ANGLE_DEGREES: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subdomain {
    /// Free-flow region governed by the Brinkman-Forchheimer equations.
    Brinkman,
    /// Porous region governed by Darcy's law.
    Darcy,
}

impl Subdomain {
    pub fn short_name(self) -> &'static str {
        match self {
            Subdomain::Brinkman => "B",
            Subdomain::Darcy => "D",
        }
    }
}

/// Which side of the bounding box an outer boundary edge lies on; `Inner` for
/// boundary edges strictly inside the bounding box (re-entrant parts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    Left,
    Right,
    Top,
    Bottom,
    Inner,
}

impl BoundaryTag {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryTag::Left => "left",
            BoundaryTag::Right => "right",
            BoundaryTag::Top => "top",
            BoundaryTag::Bottom => "bottom",
            BoundaryTag::Inner => "inner",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Interior(Subdomain),
    Interface,
    Boundary(Subdomain, BoundaryTag),
}

impl EdgeKind {
    pub fn label(self) -> String {
        match self {
            EdgeKind::Interior(s) => format!("interior-{}", s.short_name()),
            EdgeKind::Interface => "sigma".to_string(),
            EdgeKind::Boundary(s, tag) => format!("gamma-{}:{}", s.short_name(), tag.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    /// Counter-clockwise vertex indices.
    pub vertices: [usize; 3],
    pub subdomain: Subdomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    /// Vertex indices in ascending order.
    pub vertices: [usize; 2],
    pub kind: EdgeKind,
    /// Adjacent triangles. For interface edges `triangles[0]` is the Brinkman
    /// triangle and `triangles[1]` the Darcy triangle; boundary edges only have
    /// `triangles[0]`.
    pub triangles: [Option<usize>; 2],
}

/// Two adjacent interface edges merged into one macro-edge of the coarse
/// interface partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacroEdge {
    /// Interface edges, in chain order.
    pub edges: [usize; 2],
    /// Chain start vertex, shared vertex, chain end vertex.
    pub vertices: [usize; 3],
}

/// Conforming triangulation of the coupled domain.
#[derive(Debug, Clone)]
pub struct CoupledMesh<T> {
    vertices: Vec<Point<T>>,
    triangles: Vec<Triangle>,
    edges: Vec<Edge>,
    tri_edges: Vec<[usize; 3]>,
    edge_normals: Vec<Vec2<T>>,
    edge_lengths: Vec<T>,
    tri_areas: Vec<T>,
    tri_diameters: Vec<T>,
    interface_edges: Vec<usize>,
    interface_pairs: Vec<MacroEdge>,
    hierarchy: refine::Hierarchy<T>,
    origin: Vec<usize>,
}

#[inline]
pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl<T: Real> CoupledMesh<T> {
    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Point<T> {
        self.vertices[v]
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> &Triangle {
        &self.triangles[t]
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Edge ids of triangle `t`; entry `i` is the edge opposite local vertex `i`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.tri_edges[t]
    }

    /// Fixed unit normal of edge `e`: outward on the boundary, from the
    /// Brinkman side into the Darcy side on the interface, and a
    /// vertex-order convention elsewhere.
    pub fn edge_normal(&self, e: usize) -> Vec2<T> {
        self.edge_normals[e]
    }

    /// Unit tangent `t = (-n2, n1)` paired with [`Self::edge_normal`].
    pub fn edge_tangent(&self, e: usize) -> Vec2<T> {
        geometry::rot90(self.edge_normals[e])
    }

    pub fn edge_length(&self, e: usize) -> T {
        self.edge_lengths[e]
    }

    pub fn area(&self, t: usize) -> T {
        self.tri_areas[t]
    }

    /// Barycentric coordinates given with respect to the vertices of `t`
    /// sorted by `(x, y)`, re-expressed in the local vertex order. Applying a
    /// quadrature rule through this map places its points independently of
    /// the vertex numbering.
    pub fn canonical_barycentric(&self, t: usize, b: [T; 3]) -> [T; 3] {
        let v = self.triangles[t].vertices.map(|i| self.vertices[i]);
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| v[i][0].partial_cmp(&v[j][0]).unwrap().then(v[i][1].partial_cmp(&v[j][1]).unwrap()));
        let mut out = [T::zero(); 3];
        for (k, &i) in order.iter().enumerate() {
            out[i] = b[k];
        }
        out
    }

    /// Longest edge of triangle `t`.
    pub fn diameter(&self, t: usize) -> T {
        self.tri_diameters[t]
    }

    pub fn corners(&self, t: usize) -> [Point<T>; 3] {
        self.triangles[t].vertices.map(|v| self.vertices[v])
    }

    pub fn centroid(&self, t: usize) -> Point<T> {
        let [a, b, c] = self.corners(t);
        let third = T::one() / T::lit(3.0);
        [(a[0] + b[0] + c[0]) * third, (a[1] + b[1] + c[1]) * third]
    }

    pub fn edge_endpoints(&self, e: usize) -> [Point<T>; 2] {
        self.edges[e].vertices.map(|v| self.vertices[v])
    }

    /// Interface edges ordered along the interface chain.
    pub fn interface_edges(&self) -> &[usize] {
        &self.interface_edges
    }

    /// Pairing of the interface edges into macro-edges.
    pub fn interface_pairs(&self) -> &[MacroEdge] {
        &self.interface_pairs
    }

    /// Local edge index (0..3) of edge `e` in triangle `t`.
    pub fn local_edge_index(&self, t: usize, e: usize) -> Option<usize> {
        self.tri_edges[t].iter().position(|&x| x == e)
    }

    pub fn triangles_in(&self, sub: Subdomain) -> impl Iterator<Item = usize> + '_ {
        self.triangles
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.subdomain == sub)
            .map(|(i, _)| i)
    }

    pub fn subdomain_area(&self, sub: Subdomain) -> T {
        self.triangles_in(sub).map(|t| self.tri_areas[t]).sum()
    }

    pub fn total_area(&self) -> T {
        self.tri_areas.iter().copied().sum()
    }

    /// Largest triangle diameter in subdomain `sub` (`h_B` or `h_D`).
    pub fn mesh_size(&self, sub: Subdomain) -> T {
        self.triangles_in(sub)
            .map(|t| self.tri_diameters[t])
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Longest macro-edge of the paired interface partition (`h_Sigma`).
    pub fn interface_mesh_size(&self) -> T {
        self.interface_pairs
            .iter()
            .map(|m| self.edge_lengths[m.edges[0]] + self.edge_lengths[m.edges[1]])
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_degrees(&self) -> T {
        let mut min = T::lit(180.0);
        for t in 0..self.triangles.len() {
            let p = self.corners(t);
            for i in 0..3 {
                let a = geometry::sub(p[(i + 1) % 3], p[i]);
                let b = geometry::sub(p[(i + 2) % 3], p[i]);
                let cos = geometry::dot(a, b) / (geometry::norm(a) * geometry::norm(b));
                let ang = cos.max(-T::one()).min(T::one()).acos().to_degrees();
                min = min.min(ang);
            }
        }
        min
    }

    /// Checks every structural invariant of the coupled mesh.
    pub fn check_invariants(&self) -> Result<(), MeshError> {
        for (t, _) in self.triangles.iter().enumerate() {
            let [a, b, c] = self.corners(t);
            if geometry::signed_area(a, b, c) <= T::zero() {
                return Err(MeshError::Invariant(format!("triangle {t} has non-positive signed area")));
            }
        }
        let mut seen = vec![0usize; self.triangles.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            let n = edge.triangles.iter().flatten().count();
            for &t in edge.triangles.iter().flatten() {
                if !self.tri_edges[t].contains(&e) {
                    return Err(MeshError::Invariant(format!("edge {e} not listed by triangle {t}")));
                }
                seen[t] += 1;
            }
            match edge.kind {
                EdgeKind::Interior(sub) => {
                    if n != 2 {
                        return Err(MeshError::Invariant(format!("interior edge {e} has {n} triangles")));
                    }
                    for &t in edge.triangles.iter().flatten() {
                        if self.triangles[t].subdomain != sub {
                            return Err(MeshError::Invariant(format!("interior edge {e} crosses subdomains")));
                        }
                    }
                }
                EdgeKind::Interface => {
                    let (Some(tb), Some(td)) = (edge.triangles[0], edge.triangles[1]) else {
                        return Err(MeshError::Invariant(format!("interface edge {e} lacks a side")));
                    };
                    if self.triangles[tb].subdomain != Subdomain::Brinkman
                        || self.triangles[td].subdomain != Subdomain::Darcy
                    {
                        return Err(MeshError::Invariant(format!("interface edge {e} sides mislabelled")));
                    }
                    for &t in &[tb, td] {
                        let vs = self.triangles[t].vertices;
                        if !edge.vertices.iter().all(|v| vs.contains(v)) {
                            return Err(MeshError::Invariant(format!("interface edge {e} not matched by {t}")));
                        }
                    }
                    // normal must point out of the Brinkman triangle
                    let out = self.outward_normal(tb, self.local_edge_index(tb, e).unwrap());
                    if geometry::dot(out, self.edge_normals[e]) <= T::zero() {
                        return Err(MeshError::Invariant(format!("interface normal of edge {e} not B->D")));
                    }
                }
                EdgeKind::Boundary(sub, _) => {
                    if n != 1 || self.triangles[edge.triangles[0].unwrap()].subdomain != sub {
                        return Err(MeshError::Invariant(format!("boundary edge {e} malformed")));
                    }
                }
            }
        }
        if seen.iter().any(|&s| s != 3) {
            return Err(MeshError::Invariant("triangle/edge incidence is not 3 per triangle".into()));
        }
        if self.interface_edges.len() % 2 != 0 {
            return Err(MeshError::OddInterface(self.interface_edges.len()));
        }
        if self.interface_pairs.len() * 2 != self.interface_edges.len() {
            return Err(MeshError::Invariant("interface pairs do not cover the interface".into()));
        }
        for m in &self.interface_pairs {
            let [e0, e1] = m.edges;
            let shared = self.edges[e0].vertices.iter().any(|v| self.edges[e1].vertices.contains(v));
            if !shared || self.edges[e0].kind != EdgeKind::Interface || self.edges[e1].kind != EdgeKind::Interface {
                return Err(MeshError::Invariant(format!("macro-edge {:?} is not two adjacent interface edges", m.edges)));
            }
        }
        if self.min_angle_degrees() < T::lit(MIN_ANGLE_DEGREES) {
            return Err(MeshError::Invariant(format!(
                "minimum angle {} below {MIN_ANGLE_DEGREES} degrees",
                self.min_angle_degrees()
            )));
        }
        Ok(())
    }

    /// Outward unit normal of local edge `i` (opposite local vertex `i`) of triangle `t`.
    pub fn outward_normal(&self, t: usize, i: usize) -> Vec2<T> {
        let p = self.corners(t);
        let a = p[(i + 1) % 3];
        let b = p[(i + 2) % 3];
        let d = geometry::sub(b, a);
        let len = geometry::norm(d);
        // counter-clockwise triangle: outward normal is d rotated by -90 degrees
        [d[1] / len, -d[0] / len]
    }

    /// Builds a mesh from counter-clockwise triangles. Edges that belong to a
    /// single triangle are boundary edges tagged by `tag(a, b)`.
    pub fn from_triangles(
        vertices: Vec<Point<T>>,
        triangles: Vec<Triangle>,
        tag: impl Fn(Point<T>, Point<T>) -> BoundaryTag,
    ) -> Result<Self, MeshError> {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &triangles {
            if tri.vertices.iter().any(|&v| v >= vertices.len()) {
                return Err(MeshError::Invariant(format!("triangle {:?} references a missing vertex", tri.vertices)));
            }
            for i in 0..3 {
                *count.entry(edge_key(tri.vertices[i], tri.vertices[(i + 1) % 3])).or_default() += 1;
            }
        }
        let tags = count
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|((a, b), _)| ((a, b), tag(vertices[a], vertices[b])))
            .collect();
        let leaves = triangles.into_iter().map(|t| refine::Leaf { v: t.vertices, sub: t.subdomain }).collect();
        Self::from_hierarchy(refine::Hierarchy::new(vertices, leaves, tags))
    }

    /// Builds the conforming mesh from a refinement hierarchy.
    fn from_hierarchy(hierarchy: refine::Hierarchy<T>) -> Result<Self, MeshError> {
        Self::build(hierarchy, true)
    }

    fn build(hierarchy: refine::Hierarchy<T>, pair: bool) -> Result<Self, MeshError> {
        let (tris, origin) = hierarchy.conforming_triangles();
        let vertices = hierarchy.vertices.clone();
        let triangles: Vec<Triangle> = tris;

        let mut key_to_edge: HashMap<(usize, usize), usize> = HashMap::with_capacity(triangles.len() * 2);
        let mut edge_tris: Vec<[Option<usize>; 2]> = Vec::new();
        let mut edge_keys: Vec<(usize, usize)> = Vec::new();
        let mut tri_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut te = [0usize; 3];
            for (i, slot) in te.iter_mut().enumerate() {
                let a = tri.vertices[(i + 1) % 3];
                let b = tri.vertices[(i + 2) % 3];
                let key = edge_key(a, b);
                let e = *key_to_edge.entry(key).or_insert_with(|| {
                    edge_keys.push(key);
                    edge_tris.push([None, None]);
                    edge_keys.len() - 1
                });
                if edge_tris[e][0].is_none() {
                    edge_tris[e][0] = Some(t);
                } else if edge_tris[e][1].is_none() {
                    edge_tris[e][1] = Some(t);
                } else {
                    return Err(MeshError::Invariant(format!("edge {key:?} shared by more than two triangles")));
                }
                *slot = e;
            }
            tri_edges.push(te);
        }

        let mut edges = Vec::with_capacity(edge_keys.len());
        for (e, &(a, b)) in edge_keys.iter().enumerate() {
            let [t0, t1] = edge_tris[e];
            let t0 = t0.expect("every edge has one triangle");
            let (kind, tris) = match t1 {
                Some(t1) => {
                    let s0 = triangles[t0].subdomain;
                    let s1 = triangles[t1].subdomain;
                    if s0 == s1 {
                        (EdgeKind::Interior(s0), [Some(t0), Some(t1)])
                    } else if s0 == Subdomain::Brinkman {
                        (EdgeKind::Interface, [Some(t0), Some(t1)])
                    } else {
                        (EdgeKind::Interface, [Some(t1), Some(t0)])
                    }
                }
                None => {
                    let tag = hierarchy.tags.get(&(a, b)).copied().ok_or_else(|| {
                        MeshError::Invariant(format!(
                            "edge ({a}, {b}) has one triangle but is not on the boundary (hanging node)"
                        ))
                    })?;
                    (EdgeKind::Boundary(triangles[t0].subdomain, tag), [Some(t0), None])
                }
            };
            edges.push(Edge { vertices: [a, b], kind, triangles: tris });
        }

        let mut mesh = CoupledMesh {
            vertices,
            triangles,
            edges,
            tri_edges,
            edge_normals: Vec::new(),
            edge_lengths: Vec::new(),
            tri_areas: Vec::new(),
            tri_diameters: Vec::new(),
            interface_edges: Vec::new(),
            interface_pairs: Vec::new(),
            hierarchy,
            origin,
        };
        mesh.compute_geometry()?;
        mesh.interface_edges = mesh.order_interface()?;
        if pair {
            mesh.interface_pairs = mesh.pair_interface()?;
        }
        Ok(mesh)
    }

    fn compute_geometry(&mut self) -> Result<(), MeshError> {
        self.tri_areas = (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.corners(t);
                geometry::signed_area(a, b, c)
            })
            .collect();
        if let Some(t) = self.tri_areas.iter().position(|&a| a <= T::zero()) {
            return Err(MeshError::DegenerateTriangle(t));
        }
        self.tri_diameters = (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.corners(t);
                geometry::dist(a, b).max(geometry::dist(b, c)).max(geometry::dist(c, a))
            })
            .collect();
        self.edge_lengths = self
            .edges
            .iter()
            .map(|e| geometry::dist(self.vertices[e.vertices[0]], self.vertices[e.vertices[1]]))
            .collect();
        let mut normals = Vec::with_capacity(self.edges.len());
        for (e, edge) in self.edges.iter().enumerate() {
            let n = match edge.kind {
                EdgeKind::Interior(_) => {
                    let d = geometry::sub(self.vertices[edge.vertices[1]], self.vertices[edge.vertices[0]]);
                    let len = self.edge_lengths[e];
                    [d[1] / len, -d[0] / len]
                }
                EdgeKind::Interface | EdgeKind::Boundary(..) => {
                    let t = edge.triangles[0].unwrap();
                    let i = self.local_edge_index(t, e).unwrap();
                    self.outward_normal(t, i)
                }
            };
            normals.push(n);
        }
        self.edge_normals = normals;
        Ok(())
    }

    /// Orders the interface edges into a chain starting from the
    /// lexicographically smallest chain endpoint.
    fn order_interface(&self) -> Result<Vec<usize>, MeshError> {
        let sigma: Vec<usize> = (0..self.edges.len())
            .filter(|&e| self.edges[e].kind == EdgeKind::Interface)
            .collect();
        if sigma.is_empty() {
            return Ok(Vec::new());
        }
        let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
        for &e in &sigma {
            for &v in &self.edges[e].vertices {
                incident.entry(v).or_default().push(e);
            }
        }
        if let Some((v, _)) = incident.iter().find(|(_, es)| es.len() > 2) {
            return Err(MeshError::NonChainInterface(format!("vertex {v} has more than two interface edges")));
        }
        let mut ends: Vec<usize> = incident.iter().filter(|(_, es)| es.len() == 1).map(|(&v, _)| v).collect();
        if ends.len() != 2 {
            return Err(MeshError::NonChainInterface(format!(
                "expected one open chain with two endpoints, found {} endpoints",
                ends.len()
            )));
        }
        ends.sort_by(|&a, &b| {
            let pa = self.vertices[a];
            let pb = self.vertices[b];
            pa[0].partial_cmp(&pb[0]).unwrap().then(pa[1].partial_cmp(&pb[1]).unwrap())
        });
        let mut order = Vec::with_capacity(sigma.len());
        let mut v = ends[0];
        let mut prev: Option<usize> = None;
        loop {
            let next = incident[&v].iter().copied().find(|&e| Some(e) != prev);
            let Some(e) = next else { break };
            order.push(e);
            let [a, b] = self.edges[e].vertices;
            v = if a == v { b } else { a };
            prev = Some(e);
            if order.len() > sigma.len() {
                break;
            }
        }
        if order.len() != sigma.len() {
            return Err(MeshError::NonChainInterface("interface is disconnected".into()));
        }
        Ok(order)
    }

    /// Pairs consecutive interface edges along the chain into macro-edges.
    pub fn pair_interface(&self) -> Result<Vec<MacroEdge>, MeshError> {
        pair_chain(&self.interface_edges, |e| self.edges[e].vertices)
    }

    /// Refines every marked triangle (red refinement), applies the green
    /// closure and restores an even number of interface edges.
    pub fn refine(&self, marked: &[usize]) -> Result<Self, MeshError> {
        let mut hierarchy = self.hierarchy.clone();
        let mut leaves: Vec<usize> = marked
            .iter()
            .map(|&t| {
                self.origin
                    .get(t)
                    .copied()
                    .ok_or_else(|| MeshError::Invariant(format!("marked triangle {t} does not exist")))
            })
            .collect::<Result<_, _>>()?;
        leaves.sort_unstable();
        leaves.dedup();
        hierarchy.refine_leaves(&leaves);
        // Parity repair: bisect the longest interface edge until the count is even.
        for _ in 0..64 {
            let mesh = Self::build(hierarchy.clone(), false)?;
            if mesh.interface_edges.len() % 2 == 0 {
                return Self::from_hierarchy(hierarchy);
            }
            let longest = mesh
                .interface_edges
                .iter()
                .copied()
                .fold(None::<usize>, |best, e| match best {
                    Some(b) if mesh.edge_lengths[b] >= mesh.edge_lengths[e] => Some(b),
                    _ => Some(e),
                })
                .expect("interface not empty");
            let [a, b] = mesh.edges[longest].vertices;
            hierarchy.bisect_edge(a, b);
            hierarchy.close();
        }
        Err(MeshError::Invariant("interface parity repair did not terminate".into()))
    }

    /// Uniform red refinement of every triangle.
    pub fn refine_uniform(&self) -> Result<Self, MeshError> {
        let all: Vec<usize> = (0..self.triangles.len()).collect();
        self.refine(&all)
    }

    /// `true` if triangle `t` is one half of a green (closure) bisection.
    pub fn is_green(&self, t: usize) -> bool {
        let o = self.origin[t];
        (t > 0 && self.origin[t - 1] == o) || (t + 1 < self.origin.len() && self.origin[t + 1] == o)
    }
}

/// Pairs an ordered chain of edges two by two; fails on odd counts and on
/// consecutive edges that do not share a vertex.
pub(crate) fn pair_chain(chain: &[usize], verts: impl Fn(usize) -> [usize; 2]) -> Result<Vec<MacroEdge>, MeshError> {
    if chain.len() % 2 != 0 {
        return Err(MeshError::OddInterface(chain.len()));
    }
    let mut pairs = Vec::with_capacity(chain.len() / 2);
    for w in chain.chunks(2) {
        let [a0, a1] = verts(w[0]);
        let [b0, b1] = verts(w[1]);
        let shared = if a0 == b0 || a0 == b1 {
            a0
        } else if a1 == b0 || a1 == b1 {
            a1
        } else {
            return Err(MeshError::NonChainInterface(format!("edges {} and {} are not adjacent", w[0], w[1])));
        };
        let start = if a0 == shared { a1 } else { a0 };
        let end = if b0 == shared { b1 } else { b0 };
        pairs.push(MacroEdge { edges: [w[0], w[1]], vertices: [start, shared, end] });
    }
    Ok(pairs)
}
