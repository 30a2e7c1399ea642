//! Residual a posteriori error indicators.
//!
//! Every triangle carries the squared terms of its subdomain's indicator;
//! the terms of the other subdomain are stored as zero.

use std::io::{self, Write};

use log::warn;
use rayon::prelude::*;

use crate::assembly::{forchheimer_term, BoundaryData, ProblemCoefficients};
use crate::geometry::{self, Mat2, Point, Vec2};
use crate::mesh::{CellFields, EdgeKind, Subdomain};
use crate::quadrature::{LineRule, TriangleRule};
use crate::scalar::Real;
use crate::spaces::{edge_barycentric, CoupledSolution};


/// One squared contribution to a local indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    /// `|div u_B,h|^2_T`.
    BDivergence,
    /// `h_T^2 |f_B + div sigma_B,h - K_B^-1 u_B,h - F|u_B,h|^(rho-2) u_B,h|^2_T`.
    BBulk,
    /// `h_e |[sigma_B,h n]|^2_e` over interior Brinkman edges.
    BJump,
    /// `h_e |sigma_B,h n + lambda_h n - tau|^2_e` over interface edges, with
    /// `tau` the prescribed momentum mismatch (zero unless given).
    BInterface,
    /// `h_e^-1 |u_B,h - g|^2_e` on Dirichlet edges plus `h_e |sigma_B,h n|^2_e`
    /// on traction-free edges.
    BBoundary,
    /// `|g_D - div u_D,h|^2_T`.
    DMass,
    /// `h_T^2 |f_D - K_D^-1 u_D,h|^2_T`.
    DBulk,
    /// `h_T^2 |rot(f_D - K_D^-1 u_D,h)|^2_T`.
    DRot,
    /// `h_e |[(f_D - K_D^-1 u_D,h) . t]|^2_e` over interior Darcy edges.
    DJump,
    /// `h_e |(f_D - K_D^-1 u_D,h) . t - d lambda_h / dt|^2_e` on the interface.
    DInterfaceTangential,
    /// `h_e |lambda_h - p_D,h|^2_e` on the interface.
    DInterfacePressure,
    /// `h_e |u_B,h . n - u_D,h . n - j|^2_e` on the interface, with `j` the
    /// prescribed mass mismatch (zero unless given).
    DInterfaceMass,
    /// `h_e |u_D,h . n - g . n|^2_e` on flux edges plus
    /// `h_e |(f_D - K_D^-1 u_D,h) . t|^2_e` on pressure edges.
    DBoundary,
}

pub const NUM_TERMS: usize = 13;

impl Term {
    pub const ALL: [Term; NUM_TERMS] = [
        Term::BDivergence,
        Term::BBulk,
        Term::BJump,
        Term::BInterface,
        Term::BBoundary,
        Term::DMass,
        Term::DBulk,
        Term::DRot,
        Term::DJump,
        Term::DInterfaceTangential,
        Term::DInterfacePressure,
        Term::DInterfaceMass,
        Term::DBoundary,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Term::BDivergence => "b_div",
            Term::BBulk => "b_bulk",
            Term::BJump => "b_jump",
            Term::BInterface => "b_interface",
            Term::BBoundary => "b_boundary",
            Term::DMass => "d_mass",
            Term::DBulk => "d_bulk",
            Term::DRot => "d_rot",
            Term::DJump => "d_jump",
            Term::DInterfaceTangential => "d_interface_tangential",
            Term::DInterfacePressure => "d_interface_pressure",
            Term::DInterfaceMass => "d_interface_mass",
            Term::DBoundary => "d_boundary",
        }
    }

    pub fn subdomain(self) -> Subdomain {
        if self.index() < Term::DMass.index() {
            Subdomain::Brinkman
        } else {
            Subdomain::Darcy
        }
    }
}

/// Squared indicator terms for every triangle.
#[derive(Debug, Clone)]
pub struct EstimatorField<T> {
    subdomains: Vec<Subdomain>,
    terms: Vec<[T; NUM_TERMS]>,
    local_sq: Vec<T>,
    /// Interior-edge jump integrals (edge id, `h_e |[.]|^2_e`), each added to
    /// both neighbours.
    edge_jumps: Vec<(usize, T)>,
}

impl<T: Real> EstimatorField<T> {
    /// Builds a field from per-triangle terms.
    pub fn from_terms(subdomains: Vec<Subdomain>, terms: Vec<[T; NUM_TERMS]>) -> Self {
        let local_sq = terms.iter().map(|t| t.iter().copied().sum()).collect();
        EstimatorField { subdomains, terms, local_sq, edge_jumps: Vec::new() }
    }

    pub fn num_triangles(&self) -> usize {
        self.terms.len()
    }

    pub fn subdomain(&self, t: usize) -> Subdomain {
        self.subdomains[t]
    }

    pub fn term(&self, t: usize, term: Term) -> T {
        self.terms[t][term.index()]
    }

    pub fn terms(&self, t: usize) -> &[T; NUM_TERMS] {
        &self.terms[t]
    }

    /// `Theta_{B,T}^2` or `Theta_{D,T}^2`.
    pub fn local_squared(&self, t: usize) -> T {
        self.local_sq[t]
    }

    /// `Theta_{BFD,T}`.
    pub fn local(&self, t: usize) -> T {
        self.local_sq[t].sqrt()
    }

    pub fn locals(&self) -> Vec<T> {
        self.local_sq.iter().map(|v| v.sqrt()).collect()
    }

    pub fn edge_jumps(&self) -> &[(usize, T)] {
        &self.edge_jumps
    }

    /// Sum of `Theta_T^2` over the triangles of one subdomain.
    pub fn subdomain_squared(&self, sub: Subdomain) -> T {
        self.local_sq.iter().zip(&self.subdomains).filter(|(_, &s)| s == sub).map(|(&v, _)| v).sum()
    }

    /// `Theta_BFD`.
    pub fn global(&self) -> T {
        self.local_sq.iter().copied().sum::<T>().sqrt()
    }

    /// Sum of one term over all triangles.
    pub fn term_total(&self, term: Term) -> T {
        self.terms.iter().map(|t| t[term.index()]).sum()
    }

    /// CSV with one row per triangle: id, subdomain, `Theta_T^2` and every term.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        write!(w, "triangle,subdomain,theta_sq")?;
        for term in Term::ALL {
            write!(w, ",{}", term.name())?;
        }
        writeln!(w)?;
        for (t, terms) in self.terms.iter().enumerate() {
            write!(w, "{t},{},{:.6e}", self.subdomains[t].short_name(), self.local_sq[t].to_f64_lossy())?;
            for v in terms {
                write!(w, ",{:.6e}", v.to_f64_lossy())?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Cell data for VTK export: `theta`, `theta_sq` and every term.
    pub fn cell_fields(&self) -> CellFields {
        let mut fields = CellFields::default()
            .scalar("theta", self.locals().iter().map(|v| v.to_f64_lossy()).collect())
            .scalar("theta_sq", self.local_sq.iter().map(|v| v.to_f64_lossy()).collect());
        for term in Term::ALL {
            fields = fields.scalar(term.name(), self.terms.iter().map(|t| t[term.index()].to_f64_lossy()).collect());
        }
        fields
    }
}

/// Evaluates the indicators of a discrete solution.
pub struct Estimator<'a, T: Real> {
    coeffs: &'a ProblemCoefficients<T>,
    bc: &'a BoundaryData<T>,
    volume: TriangleRule<T>,
    line: LineRule<T>,
}

fn stress<T: Real>(mu: T, p: T, grad: &Mat2<T>, n: Vec2<T>) -> Vec2<T> {
    geometry::sub(geometry::scale(mu, geometry::mat_vec(grad, n)), geometry::scale(p, n))
}

impl<'a, T: Real> Estimator<'a, T> {
    /// Degree-12 volume quadrature and 5-point Gauss on edges.
    pub fn new(coeffs: &'a ProblemCoefficients<T>, bc: &'a BoundaryData<T>) -> Self {
        Estimator { coeffs, bc, volume: TriangleRule::collapsed_gauss(7), line: LineRule::gauss(5) }
    }

    /// Computes every term on every triangle.
    pub fn evaluate(&self, sol: &CoupledSolution<T>) -> EstimatorField<T> {
        let mesh = sol.mesh();
        let nt = mesh.num_triangles();
        let fd_rot = self.coeffs.rot_f_d.is_none() && mesh.triangles_in(Subdomain::Darcy).next().is_some();
        if fd_rot {
            warn!("rot f_D not supplied; evaluating it by central finite differences");
        }
        let mut terms: Vec<[T; NUM_TERMS]> = (0..nt)
            .into_par_iter()
            .map(|t| match mesh.triangle(t).subdomain {
                Subdomain::Brinkman => self.volume_b(sol, t),
                Subdomain::Darcy => self.volume_d(sol, t),
            })
            .collect();
        let edge_terms: Vec<Vec<(usize, Term, T)>> =
            (0..mesh.edges().len()).into_par_iter().map(|e| self.edge_terms(sol, e)).collect();
        let mut edge_jumps = Vec::new();
        for (e, contributions) in edge_terms.into_iter().enumerate() {
            for (t, term, v) in contributions {
                terms[t][term.index()] += v;
                if matches!(mesh.edge(e).kind, EdgeKind::Interior(_)) && mesh.edge(e).triangles[0] == Some(t) {
                    edge_jumps.push((e, v));
                }
            }
        }
        let subdomains = mesh.triangles().iter().map(|tri| tri.subdomain).collect();
        let mut field = EstimatorField::from_terms(subdomains, terms);
        field.edge_jumps = edge_jumps;
        field
    }

    fn volume_b(&self, sol: &CoupledSolution<T>, t: usize) -> [T; NUM_TERMS] {
        let c = self.coeffs;
        let geom = sol.space().geometry(t);
        let h = sol.mesh().diameter(t);
        let visc = geometry::scale(c.mu, sol.laplacian_u_b(t));
        let (mut div, mut bulk) = (T::zero(), T::zero());
        for (b, &w) in self.volume.points.iter().zip(&self.volume.weights) {
            let bary = &sol.mesh().canonical_barycentric(t, *b);
            let w = w * geom.area;
            let x = geom.point(*bary);
            let (u, g) = sol.u_b(t, *bary);
            let d = g[0][0] + g[1][1];
            div += w * d * d;
            let drag = geometry::add(c.k_b.apply_inverse(u), forchheimer_term(c.forchheimer, c.rho, u));
            let r = geometry::sub(geometry::add((c.f_b)(x), visc), drag);
            bulk += w * geometry::norm_sq(r);
        }
        let mut out = [T::zero(); NUM_TERMS];
        out[Term::BDivergence.index()] = div;
        out[Term::BBulk.index()] = h * h * bulk;
        out
    }

    fn volume_d(&self, sol: &CoupledSolution<T>, t: usize) -> [T; NUM_TERMS] {
        let c = self.coeffs;
        let geom = sol.space().geometry(t);
        let h = sol.mesh().diameter(t);
        let div = sol.div_u_d(t);
        // u_D,h = a + (div/2) x on t, so rot(K^-1 u_D,h) = (div/2)(Kinv_21 - Kinv_12)
        let kinv = c.k_d.inverse();
        let rot_drag = div / T::lit(2.0) * (kinv[1][0] - kinv[0][1]);
        let (mut mass, mut bulk, mut rot) = (T::zero(), T::zero(), T::zero());
        for (b, &w) in self.volume.points.iter().zip(&self.volume.weights) {
            let bary = &sol.mesh().canonical_barycentric(t, *b);
            let w = w * geom.area;
            let x = geom.point(*bary);
            let m = (c.g_d)(x) - div;
            mass += w * m * m;
            let r = geometry::sub((c.f_d)(x), c.k_d.apply_inverse(sol.u_d(t, x)));
            bulk += w * geometry::norm_sq(r);
            let rf = match &c.rot_f_d {
                Some(f) => f(x),
                None => fd_rot(&*c.f_d, x, h),
            };
            let rr = rf - rot_drag;
            rot += w * rr * rr;
        }
        let mut out = [T::zero(); NUM_TERMS];
        out[Term::DMass.index()] = mass;
        out[Term::DBulk.index()] = h * h * bulk;
        out[Term::DRot.index()] = h * h * rot;
        out
    }

    /// `(f_D - K_D^-1 u_D,h)` restricted to Darcy triangle `t`.
    fn darcy_residual(&self, sol: &CoupledSolution<T>, t: usize, x: Point<T>) -> Vec2<T> {
        geometry::sub((self.coeffs.f_d)(x), self.coeffs.k_d.apply_inverse(sol.u_d(t, x)))
    }

    /// Integrates `f(s)` along edge `e` with the 5-point rule, scaled by the edge length.
    fn edge_integral(&self, len: T, mut f: impl FnMut(T) -> T) -> T {
        self.line.points.iter().zip(&self.line.weights).map(|(&s, &w)| w * len * f(s)).sum()
    }

    fn edge_terms(&self, sol: &CoupledSolution<T>, e: usize) -> Vec<(usize, Term, T)> {
        let mesh = sol.mesh();
        let edge = mesh.edge(e);
        let len = mesh.edge_length(e);
        let n = mesh.edge_normal(e);
        let tan = mesh.edge_tangent(e);
        let [a, b] = mesh.edge_endpoints(e);
        let at = |s: T| geometry::add(geometry::scale(T::one() - s, a), geometry::scale(s, b));
        let mu = self.coeffs.mu;
        match edge.kind {
            EdgeKind::Interior(Subdomain::Brinkman) => {
                let [t0, t1] = [edge.triangles[0].unwrap(), edge.triangles[1].unwrap()];
                let (p0, p1) = (sol.p(t0), sol.p(t1));
                let v = len
                    * self.edge_integral(len, |s| {
                        let (_, g0) = sol.u_b(t0, edge_barycentric(mesh, t0, e, s));
                        let (_, g1) = sol.u_b(t1, edge_barycentric(mesh, t1, e, s));
                        geometry::norm_sq(geometry::sub(stress(mu, p0, &g0, n), stress(mu, p1, &g1, n)))
                    });
                vec![(t0, Term::BJump, v), (t1, Term::BJump, v)]
            }
            EdgeKind::Interior(Subdomain::Darcy) => {
                let [t0, t1] = [edge.triangles[0].unwrap(), edge.triangles[1].unwrap()];
                let v = len
                    * self.edge_integral(len, |s| {
                        let x = at(s);
                        let j = geometry::dot(
                            geometry::sub(self.darcy_residual(sol, t0, x), self.darcy_residual(sol, t1, x)),
                            tan,
                        );
                        j * j
                    });
                vec![(t0, Term::DJump, v), (t1, Term::DJump, v)]
            }
            EdgeKind::Interface => {
                let [tb, td] = [edge.triangles[0].unwrap(), edge.triangles[1].unwrap()];
                let (pb, pd) = (sol.p(tb), sol.p(td));
                let (mut b_if, mut d_tan, mut d_pres, mut d_mass) = (T::zero(), T::zero(), T::zero(), T::zero());
                for (&s, &w) in self.line.points.iter().zip(&self.line.weights) {
                    let w = w * len;
                    let x = at(s);
                    let (ub, gb) = sol.u_b(tb, edge_barycentric(mesh, tb, e, s));
                    let ud = sol.u_d(td, x);
                    let (lam, dlam) = sol.lambda(e, s);
                    let tau = self.bc.interface_traction.as_ref().map_or([T::zero(); 2], |f| f(x));
                    let jump = self.bc.interface_flux.as_ref().map_or(T::zero(), |f| f(x));
                    let r = geometry::sub(geometry::add(stress(mu, pb, &gb, n), geometry::scale(lam, n)), tau);
                    b_if += w * geometry::norm_sq(r);
                    let rt = geometry::dot(self.darcy_residual(sol, td, x), tan) - dlam;
                    d_tan += w * rt * rt;
                    d_pres += w * (lam - pd) * (lam - pd);
                    let m = geometry::dot(geometry::sub(ub, ud), n) - jump;
                    d_mass += w * m * m;
                }
                vec![
                    (tb, Term::BInterface, len * b_if),
                    (td, Term::DInterfaceTangential, len * d_tan),
                    (td, Term::DInterfacePressure, len * d_pres),
                    (td, Term::DInterfaceMass, len * d_mass),
                ]
            }
            EdgeKind::Boundary(Subdomain::Brinkman, tag) => {
                let t = edge.triangles[0].unwrap();
                let v = if self.bc.variant.is_b_dirichlet(tag) {
                    self.edge_integral(len, |s| {
                        let (u, _) = sol.u_b(t, edge_barycentric(mesh, t, e, s));
                        geometry::norm_sq(geometry::sub(u, (self.bc.velocity_b)(at(s))))
                    }) / len
                } else {
                    let p = sol.p(t);
                    len * self.edge_integral(len, |s| {
                        let (_, g) = sol.u_b(t, edge_barycentric(mesh, t, e, s));
                        geometry::norm_sq(stress(mu, p, &g, n))
                    })
                };
                vec![(t, Term::BBoundary, v)]
            }
            EdgeKind::Boundary(Subdomain::Darcy, tag) => {
                let t = edge.triangles[0].unwrap();
                let v = if self.bc.variant.is_d_flux(tag) {
                    len * self.edge_integral(len, |s| {
                        let x = at(s);
                        let r = geometry::dot(geometry::sub(sol.u_d(t, x), (self.bc.velocity_d)(x)), n);
                        r * r
                    })
                } else {
                    len * self.edge_integral(len, |s| {
                        let r = geometry::dot(self.darcy_residual(sol, t, at(s)), tan);
                        r * r
                    })
                };
                vec![(t, Term::DBoundary, v)]
            }
        }
    }
}

/// Central-difference `rot f = d f_2/dx_1 - d f_1/dx_2`.
fn fd_rot<T: Real>(f: &(dyn Fn(Point<T>) -> Vec2<T> + Send + Sync), x: Point<T>, h: T) -> T {
    let eps = T::lit(1e-5) * h.max(T::lit(1e-3));
    let two = T::lit(2.0);
    let d1 = (f([x[0] + eps, x[1]])[1] - f([x[0] - eps, x[1]])[1]) / (two * eps);
    let d2 = (f([x[0], x[1] + eps])[0] - f([x[0], x[1] - eps])[0]) / (two * eps);
    d1 - d2
}

/// `Theta_BFD` field of a discrete solution.
pub fn estimate<T: Real>(
    sol: &CoupledSolution<T>,
    coeffs: &ProblemCoefficients<T>,
    bc: &BoundaryData<T>,
) -> EstimatorField<T> {
    Estimator::new(coeffs, bc).evaluate(sol)
}
