//! Red-green refinement on top of a red-only hierarchy.
//!
//! The hierarchy stores only red-refined leaves. Green bisections are emitted
//! when the conforming mesh is extracted and never stored, so a green triangle
//! is never refined again: marking it red-refines its hierarchy leaf instead.

use std::collections::HashMap;

use super::{edge_key, BoundaryTag, Subdomain, Triangle};
use crate::geometry::{self, Point};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Leaf {
    pub v: [usize; 3],
    pub sub: Subdomain,
}

#[derive(Debug, Clone)]
pub(crate) struct Hierarchy<T> {
    pub vertices: Vec<Point<T>>,
    pub leaves: Vec<Leaf>,
    /// Midpoint vertex of every edge that has been split.
    pub midpoints: HashMap<(usize, usize), usize>,
    /// Boundary tag of every boundary edge, including halves of split ones.
    pub tags: HashMap<(usize, usize), BoundaryTag>,
}

impl<T: Real> Hierarchy<T> {
    pub fn new(vertices: Vec<Point<T>>, leaves: Vec<Leaf>, tags: HashMap<(usize, usize), BoundaryTag>) -> Self {
        Hierarchy { vertices, leaves, midpoints: HashMap::new(), tags }
    }

    fn midpoint_of(&self, a: usize, b: usize) -> Option<usize> {
        self.midpoints.get(&edge_key(a, b)).copied()
    }

    /// Returns the midpoint of edge `(a, b)`, creating it if needed.
    pub fn bisect_edge(&mut self, a: usize, b: usize) -> usize {
        let key = edge_key(a, b);
        if let Some(&m) = self.midpoints.get(&key) {
            return m;
        }
        let m = self.vertices.len();
        self.vertices.push(geometry::midpoint(self.vertices[a], self.vertices[b]));
        self.midpoints.insert(key, m);
        if let Some(&tag) = self.tags.get(&key) {
            self.tags.insert(edge_key(a, m), tag);
            self.tags.insert(edge_key(m, b), tag);
        }
        m
    }

    fn red(&mut self, leaf: Leaf) -> [Leaf; 4] {
        let [v0, v1, v2] = leaf.v;
        let m01 = self.bisect_edge(v0, v1);
        let m12 = self.bisect_edge(v1, v2);
        let m20 = self.bisect_edge(v2, v0);
        let sub = leaf.sub;
        [
            Leaf { v: [v0, m01, m20], sub },
            Leaf { v: [m01, v1, m12], sub },
            Leaf { v: [m20, m12, v2], sub },
            Leaf { v: [m01, m12, m20], sub },
        ]
    }

    /// Local index of the single split edge of a leaf, counted as the edge
    /// opposite that local vertex. `Err(())` if the leaf needs red refinement.
    fn split_state(&self, leaf: &Leaf) -> Result<Option<usize>, ()> {
        let mut split = None;
        let mut count = 0;
        for i in 0..3 {
            let a = leaf.v[(i + 1) % 3];
            let b = leaf.v[(i + 2) % 3];
            if let Some(m) = self.midpoint_of(a, b) {
                count += 1;
                split = Some(i);
                if self.midpoint_of(a, m).is_some() || self.midpoint_of(m, b).is_some() {
                    return Err(());
                }
            }
        }
        if count >= 2 {
            Err(())
        } else {
            Ok(split)
        }
    }

    /// Red-refines the given leaves and restores a state from which a
    /// conforming mesh can be extracted.
    pub fn refine_leaves(&mut self, marked: &[usize]) {
        let mut is_marked = vec![false; self.leaves.len()];
        for &l in marked {
            is_marked[l] = true;
        }
        let old = std::mem::take(&mut self.leaves);
        let mut next = Vec::with_capacity(old.len() + 3 * marked.len());
        for (l, leaf) in old.into_iter().enumerate() {
            if is_marked[l] {
                let children = self.red(leaf);
                next.extend_from_slice(&children);
            } else {
                next.push(leaf);
            }
        }
        self.leaves = next;
        self.close();
    }

    /// Red-refines every leaf with two or more split edges, or with a split
    /// edge whose half is split again, until no such leaf remains.
    pub fn close(&mut self) {
        loop {
            let mut changed = false;
            let old = std::mem::take(&mut self.leaves);
            let mut next = Vec::with_capacity(old.len());
            for leaf in old {
                if self.split_state(&leaf).is_err() {
                    let children = self.red(leaf);
                    next.extend_from_slice(&children);
                    changed = true;
                } else {
                    next.push(leaf);
                }
            }
            self.leaves = next;
            if !changed {
                break;
            }
        }
    }

    /// Conforming triangles and, for each, the leaf it came from.
    pub fn conforming_triangles(&self) -> (Vec<Triangle>, Vec<usize>) {
        let mut tris = Vec::with_capacity(self.leaves.len() + self.leaves.len() / 4);
        let mut origin = Vec::with_capacity(tris.capacity());
        for (l, leaf) in self.leaves.iter().enumerate() {
            match self.split_state(leaf).expect("hierarchy is closed") {
                None => {
                    tris.push(Triangle { vertices: leaf.v, subdomain: leaf.sub });
                    origin.push(l);
                }
                Some(i) => {
                    let vi = leaf.v[i];
                    let a = leaf.v[(i + 1) % 3];
                    let b = leaf.v[(i + 2) % 3];
                    let m = self.midpoint_of(a, b).unwrap();
                    tris.push(Triangle { vertices: [vi, a, m], subdomain: leaf.sub });
                    tris.push(Triangle { vertices: [vi, m, b], subdomain: leaf.sub });
                    origin.push(l);
                    origin.push(l);
                }
            }
        }
        (tris, origin)
    }
}
