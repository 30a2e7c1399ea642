use rayon::prelude::*;

use super::coefficients::{forchheimer_derivative, forchheimer_term, BoundaryData, ProblemCoefficients};
use crate::geometry::{self, Vec2};
use crate::mesh::Subdomain;
use crate::quadrature::{LineRule, TriangleRule};
use crate::scalar::Real;
use crate::spaces::{edge_barycentric, Block, FeSpace};
use crate::sparse::CsrMatrix;

type Triplets<T> = Vec<(usize, usize, T)>;

/// Largest residual entries over the free test functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport<T> {
    /// `max |R_f(v)|` over free velocity basis functions.
    pub max_f: T,
    pub argmax_f: usize,
    /// `max |R_g(q, xi)|` over pressure and multiplier basis functions.
    pub max_g: T,
    pub argmax_g: usize,
    /// Magnitude of the load and operator entries the residual is relative to.
    pub scale: T,
}

impl<T: Real> ResidualReport<T> {
    pub fn relative(&self) -> T {
        self.max_f.max(self.max_g) / self.scale
    }
}

/// Assembles every form of the discrete problem on one [`FeSpace`].
///
/// Linear blocks are assembled once at construction; the Forchheimer term and
/// its Jacobian are assembled on demand.
pub struct Assembler<'a, T: Real> {
    space: &'a FeSpace<T>,
    coeffs: &'a ProblemCoefficients<T>,
    volume: TriangleRule<T>,
    line: LineRule<T>,
    a_lin: CsrMatrix<T>,
    b: CsrMatrix<T>,
    linear: CsrMatrix<T>,
}

impl<'a, T: Real> Assembler<'a, T> {
    pub fn new(space: &'a FeSpace<T>, coeffs: &'a ProblemCoefficients<T>) -> Self {
        let mut this = Assembler {
            space,
            coeffs,
            volume: TriangleRule::dunavant8(),
            line: LineRule::gauss(5),
            a_lin: CsrMatrix::from_triplets(0, 0, &[]),
            b: CsrMatrix::from_triplets(0, 0, &[]),
            linear: CsrMatrix::from_triplets(0, 0, &[]),
        };
        let n = space.num_dofs();
        let (a_trip, b_trip) = this.linear_triplets();
        this.a_lin = CsrMatrix::from_triplets(n, n, &a_trip);
        this.b = CsrMatrix::from_triplets(n, n, &b_trip);
        let mut all = a_trip;
        all.extend(b_trip.iter().copied());
        all.extend(b_trip.iter().map(|&(r, c, v)| (c, r, v)));
        this.linear = CsrMatrix::from_triplets(n, n, &all);
        this
    }

    pub fn space(&self) -> &FeSpace<T> {
        self.space
    }

    pub fn coefficients(&self) -> &ProblemCoefficients<T> {
        self.coeffs
    }

    /// Linear part of `a`: the viscous and Darcy-drag blocks.
    pub fn a_linear(&self) -> &CsrMatrix<T> {
        &self.a_lin
    }

    /// The coupling form `b`, stored with velocity test functions as rows
    /// and pressure/multiplier trial functions as columns.
    pub fn assemble_b(&self) -> &CsrMatrix<T> {
        &self.b
    }

    /// `[[A_lin, B], [B^T, 0]]` in the global numbering.
    pub fn linear_operator(&self) -> &CsrMatrix<T> {
        &self.linear
    }

    fn linear_triplets(&self) -> (Triplets<T>, Triplets<T>) {
        let mesh = self.space.mesh();
        let layout = self.space.layout();
        let coeffs = self.coeffs;
        let locals: Vec<(Triplets<T>, Triplets<T>)> = (0..mesh.num_triangles())
            .into_par_iter()
            .map(|t| {
                let geom = self.space.geometry(t);
                let dofs = layout.local[t];
                let pt = layout.pressure_dof(t);
                let mut a = Vec::new();
                let mut b = Vec::new();
                match mesh.triangle(t).subdomain {
                    Subdomain::Brinkman => {
                        let mut local = [[T::zero(); 9]; 9];
                        let mut div = [T::zero(); 9];
                        for (bary, &w) in self.volume.points.iter().zip(&self.volume.weights) {
                            let w = w * geom.area;
                            let (vals, grads) = geom.br_shapes(*bary);
                            for i in 0..9 {
                                div[i] -= w * (grads[i][0][0] + grads[i][1][1]);
                                for j in 0..9 {
                                    let visc = geometry::frobenius_dot(&grads[j], &grads[i]);
                                    let drag = geometry::dot(coeffs.k_b.apply_inverse(vals[j]), vals[i]);
                                    local[i][j] += w * (coeffs.mu * visc + drag);
                                }
                            }
                        }
                        for i in 0..9 {
                            for j in 0..9 {
                                a.push((dofs[i], dofs[j], local[i][j]));
                            }
                            b.push((dofs[i], pt, div[i]));
                        }
                    }
                    Subdomain::Darcy => {
                        let mut local = [[T::zero(); 3]; 3];
                        for (bary, &w) in self.volume.points.iter().zip(&self.volume.weights) {
                            let w = w * geom.area;
                            let phi = geom.rt_shapes(geom.point(*bary));
                            for i in 0..3 {
                                for j in 0..3 {
                                    local[i][j] += w * geometry::dot(coeffs.k_d.apply_inverse(phi[j]), phi[i]);
                                }
                            }
                        }
                        let div = geom.rt_divergence();
                        for i in 0..3 {
                            for j in 0..3 {
                                a.push((dofs[i], dofs[j], local[i][j]));
                            }
                            b.push((dofs[i], pt, -div[i] * geom.area));
                        }
                    }
                }
                (a, b)
            })
            .collect();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (la, lb) in locals {
            a.extend(la);
            b.extend(lb);
        }
        b.extend(self.interface_triplets());
        (a, b)
    }

    /// `<v_B.n - v_D.n, xi>` on the interface.
    fn interface_triplets(&self) -> Triplets<T> {
        let mesh = self.space.mesh();
        let layout = self.space.layout();
        let mut out = Vec::new();
        for &e in mesh.interface_edges() {
            let [tb, td] = mesh.edge(e).triangles.map(Option::unwrap);
            let n = mesh.edge_normal(e);
            let len = mesh.edge_length(e);
            let gb = self.space.geometry(tb);
            let gd = self.space.geometry(td);
            let [p0, p1] = mesh.edge_endpoints(e);
            let mut lb = [[T::zero(); 2]; 9];
            let mut ld = [[T::zero(); 2]; 3];
            let mut hat_dofs = [0usize; 2];
            for (&s, &w) in self.line.points.iter().zip(&self.line.weights) {
                let w = w * len;
                let hats = self.space.multiplier_shapes(e, s);
                hat_dofs = [hats[0].0, hats[1].0];
                let (vals, _) = gb.br_shapes(edge_barycentric(mesh, tb, e, s));
                let x = geometry::add(p0, geometry::scale(s, geometry::sub(p1, p0)));
                let rt = gd.rt_shapes(x);
                for k in 0..2 {
                    for i in 0..9 {
                        lb[i][k] += w * geometry::dot(vals[i], n) * hats[k].1;
                    }
                    for i in 0..3 {
                        ld[i][k] -= w * geometry::dot(rt[i], n) * hats[k].1;
                    }
                }
            }
            for k in 0..2 {
                for i in 0..9 {
                    out.push((layout.local[tb][i], hat_dofs[k], lb[i][k]));
                }
                for i in 0..3 {
                    out.push((layout.local[td][i], hat_dofs[k], ld[i][k]));
                }
            }
        }
        out
    }

    fn br_values(&self, t: usize, x: &[T], vals: &[Vec2<T>; 9]) -> Vec2<T> {
        let dofs = self.space.layout().local[t];
        let mut u = [T::zero(); 2];
        for i in 0..9 {
            u = geometry::add(u, geometry::scale(x[dofs[i]], vals[i]));
        }
        u
    }

    /// Local Forchheimer vector and, if requested, its Jacobian.
    fn forchheimer_local(&self, t: usize, x: &[T], jacobian: bool) -> ([T; 9], Option<[[T; 9]; 9]>) {
        let geom = self.space.geometry(t);
        let (f, rho) = (self.coeffs.forchheimer, self.coeffs.rho);
        let mut vec = [T::zero(); 9];
        let mut jac = [[T::zero(); 9]; 9];
        for (bary, &w) in self.volume.points.iter().zip(&self.volume.weights) {
            let w = w * geom.area;
            let (vals, _) = geom.br_shapes(*bary);
            let u = self.br_values(t, x, &vals);
            let nl = forchheimer_term(f, rho, u);
            for i in 0..9 {
                vec[i] += w * geometry::dot(nl, vals[i]);
            }
            if jacobian {
                let d = forchheimer_derivative(f, rho, u);
                for j in 0..9 {
                    let dj = geometry::mat_vec(&d, vals[j]);
                    for i in 0..9 {
                        jac[i][j] += w * geometry::dot(dj, vals[i]);
                    }
                }
            }
        }
        (vec, jacobian.then_some(jac))
    }

    fn brinkman_triangles(&self) -> Vec<usize> {
        self.space.mesh().triangles_in(Subdomain::Brinkman).collect()
    }

    /// Forchheimer contribution `F(|u_B|^(rho-2) u_B, v_B)` for every test function.
    pub fn forchheimer_vector(&self, x: &[T]) -> Vec<T> {
        let layout = self.space.layout();
        let tris = self.brinkman_triangles();
        let locals: Vec<[T; 9]> = tris.par_iter().map(|&t| self.forchheimer_local(t, x, false).0).collect();
        let mut out = vec![T::zero(); self.space.num_dofs()];
        for (&t, local) in tris.iter().zip(&locals) {
            for i in 0..9 {
                out[layout.local[t][i]] += local[i];
            }
        }
        out
    }

    /// Triplets of the Forchheimer Jacobian.
    pub fn forchheimer_jacobian_triplets(&self, x: &[T]) -> Triplets<T> {
        let layout = self.space.layout();
        let tris = self.brinkman_triangles();
        let locals: Vec<[[T; 9]; 9]> =
            tris.par_iter().map(|&t| self.forchheimer_local(t, x, true).1.unwrap()).collect();
        let mut out = Vec::with_capacity(81 * tris.len());
        for (&t, local) in tris.iter().zip(&locals) {
            let dofs = layout.local[t];
            for i in 0..9 {
                for j in 0..9 {
                    out.push((dofs[i], dofs[j], local[i][j]));
                }
            }
        }
        out
    }

    /// `[a(u), v]` for every basis function `v` (zero on pressure and
    /// multiplier rows).
    pub fn apply_a(&self, x: &[T]) -> Vec<T> {
        let mut out = self.a_lin.matvec(x);
        for (o, f) in out.iter_mut().zip(self.forchheimer_vector(x)) {
            *o += f;
        }
        out
    }

    /// Jacobian of [`Self::apply_a`] at `x`.
    pub fn jacobian_a(&self, x: &[T]) -> CsrMatrix<T> {
        let n = self.space.num_dofs();
        let mut trips: Triplets<T> = self.a_lin.triplets().collect();
        trips.extend(self.forchheimer_jacobian_triplets(x));
        CsrMatrix::from_triplets(n, n, &trips)
    }

    /// Loads `[f, v]` on velocity rows and `[g, (q, xi)]` on pressure and
    /// multiplier rows, including the interface data terms.
    pub fn assemble_rhs(&self, bc: &BoundaryData<T>) -> Vec<T> {
        let mesh = self.space.mesh();
        let layout = self.space.layout();
        let coeffs = self.coeffs;
        let locals: Vec<[T; 10]> = (0..mesh.num_triangles())
            .into_par_iter()
            .map(|t| {
                let geom = self.space.geometry(t);
                let mut local = [T::zero(); 10];
                for (bary, &w) in self.volume.points.iter().zip(&self.volume.weights) {
                    let w = w * geom.area;
                    let x = geom.point(*bary);
                    match mesh.triangle(t).subdomain {
                        Subdomain::Brinkman => {
                            let f = (coeffs.f_b)(x);
                            let (vals, _) = geom.br_shapes(*bary);
                            for i in 0..9 {
                                local[i] += w * geometry::dot(f, vals[i]);
                            }
                        }
                        Subdomain::Darcy => {
                            let f = (coeffs.f_d)(x);
                            let phi = geom.rt_shapes(x);
                            for i in 0..3 {
                                local[i] += w * geometry::dot(f, phi[i]);
                            }
                            local[9] -= w * (coeffs.g_d)(x);
                        }
                    }
                }
                local
            })
            .collect();
        let mut rhs = vec![T::zero(); self.space.num_dofs()];
        for (t, local) in locals.iter().enumerate() {
            let nloc = match mesh.triangle(t).subdomain {
                Subdomain::Brinkman => 9,
                Subdomain::Darcy => 3,
            };
            for i in 0..nloc {
                rhs[layout.local[t][i]] += local[i];
            }
            rhs[layout.pressure_dof(t)] += local[9];
        }
        if bc.interface_traction.is_some() || bc.interface_flux.is_some() {
            for &e in mesh.interface_edges() {
                let tb = mesh.edge(e).triangles[0].unwrap();
                let gb = self.space.geometry(tb);
                let len = mesh.edge_length(e);
                let [p0, p1] = mesh.edge_endpoints(e);
                for (&s, &w) in self.line.points.iter().zip(&self.line.weights) {
                    let w = w * len;
                    let x = geometry::add(p0, geometry::scale(s, geometry::sub(p1, p0)));
                    if let Some(tau) = &bc.interface_traction {
                        let tau = tau(x);
                        let (vals, _) = gb.br_shapes(edge_barycentric(mesh, tb, e, s));
                        for i in 0..9 {
                            rhs[layout.local[tb][i]] += w * geometry::dot(tau, vals[i]);
                        }
                    }
                    if let Some(j) = &bc.interface_flux {
                        let j = j(x);
                        for (dof, phi, _) in self.space.multiplier_shapes(e, s) {
                            rhs[dof] += w * j * phi;
                        }
                    }
                }
            }
        }
        rhs
    }

    /// `rhs - L x - N(x)`: entry `i` is `R_f(v_i)` on velocity rows and
    /// `R_g(q_i, xi_i)` on pressure and multiplier rows.
    pub fn residual(&self, x: &[T], rhs: &[T]) -> Vec<T> {
        let lx = self.linear.matvec(x);
        let nl = self.forchheimer_vector(x);
        rhs.iter().zip(lx).zip(nl).map(|((&r, l), n)| r - l - n).collect()
    }

    /// Evaluates the residual functionals on all free basis functions.
    pub fn residual_functionals(&self, x: &[T], rhs: &[T]) -> ResidualReport<T> {
        let layout = self.space.layout();
        let res = self.residual(x, rhs);
        let op = self.apply_a(x);
        let bx = self.linear.matvec(x);
        let velocity_end = layout.range(Block::VelocityD).end;
        let mut report = ResidualReport {
            max_f: T::zero(),
            argmax_f: 0,
            max_g: T::zero(),
            argmax_g: 0,
            scale: T::min_positive_value(),
        };
        for (i, &r) in res.iter().enumerate() {
            if layout.constrained[i] {
                continue;
            }
            report.scale = report.scale.max(rhs[i].abs()).max(op[i].abs()).max(bx[i].abs());
            if i < velocity_end {
                if r.abs() > report.max_f {
                    report.max_f = r.abs();
                    report.argmax_f = i;
                }
            } else if r.abs() > report.max_g {
                report.max_g = r.abs();
                report.argmax_g = i;
            }
        }
        report
    }
}
