//! Brute-force re-evaluation of every estimator term on tiny meshes.
//!
//! Discrete fields are evaluated from their own closed-form basis functions
//! (barycentric hats and bubbles, Raviart-Thomas fields, multiplier hats),
//! volume integrals use a degree-13 Grundmann-Moller rule and edge
//! integrals a 10-point Gauss-Legendre rule computed here.

use std::sync::Arc;

use bfd_core::assembly::{BoundaryData, ProblemCoefficients};
use bfd_core::estimator::{estimate, Term};
use bfd_core::geometry::SpdTensor;
use bfd_core::mesh::{BoundaryTag, CoupledMesh, EdgeKind, Subdomain, Triangle};
use bfd_core::spaces::{BcVariant, CoupledSolution, FeSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Check;

type P = [f64; 2];

/// Grundmann-Moller rule of degree `2s + 1` on the triangle, as
/// (barycentric point, weight normalised to unit area).
pub fn grundmann_moller(s: usize) -> Vec<([f64; 3], f64)> {
    let n = 2.0;
    let d = (2 * s + 1) as f64;
    let fact = |k: usize| (1..=k).map(|v| v as f64).product::<f64>();
    let mut out = Vec::new();
    for i in 0..=s {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let denom = d + n - 2.0 * i as f64;
        let w = sign * 2f64.powi(-2 * s as i32) * denom.powi(2 * s as i32 + 1)
            / (fact(i) * fact(2 * s + 1 + 2 - i));
        let m = s - i;
        for b0 in 0..=m {
            for b1 in 0..=m - b0 {
                let b2 = m - b0 - b1;
                let bary = [b0, b1, b2].map(|b| (2.0 * b as f64 + 1.0) / denom);
                out.push((bary, w));
            }
        }
    }
    // reference-simplex weights sum to 1/2
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    out.into_iter().map(|(b, w)| (b, w / total)).collect()
}

/// Gauss-Legendre nodes and weights on [0, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push(((1.0 - x) / 2.0, 1.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1]]
}
fn dot(a: P, b: P) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}
fn nsq(a: P) -> f64 {
    dot(a, a)
}

/// Discrete fields on one triangle, rebuilt from the coefficient vector.
struct Local {
    c: [P; 3],
    area: f64,
    grad: [P; 3],
}

impl Local {
    fn new(mesh: &CoupledMesh<f64>, t: usize) -> Self {
        let c = mesh.corners(t);
        let area = 0.5 * ((c[1][0] - c[0][0]) * (c[2][1] - c[0][1]) - (c[2][0] - c[0][0]) * (c[1][1] - c[0][1]));
        let grad = std::array::from_fn(|i| {
            let a = c[(i + 1) % 3];
            let b = c[(i + 2) % 3];
            [(a[1] - b[1]) / (2.0 * area), (b[0] - a[0]) / (2.0 * area)]
        });
        Local { c, area, grad }
    }

    fn bary(&self, x: P) -> [f64; 3] {
        std::array::from_fn(|i| {
            let a = self.c[(i + 1) % 3];
            let b = self.c[(i + 2) % 3];
            ((a[0] - x[0]) * (b[1] - x[1]) - (b[0] - x[0]) * (a[1] - x[1])) / (2.0 * self.area)
        })
    }

    fn point(&self, l: [f64; 3]) -> P {
        [0, 1].map(|k| l[0] * self.c[0][k] + l[1] * self.c[1][k] + l[2] * self.c[2][k])
    }
}

struct Fields<'a> {
    mesh: &'a CoupledMesh<f64>,
    space: &'a FeSpace<f64>,
    x: &'a [f64],
}

impl Fields<'_> {
    fn edges(&self, t: usize) -> [usize; 3] {
        let tri = self.mesh.triangle(t).vertices;
        std::array::from_fn(|i| {
            let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
            (0..self.mesh.edges().len())
                .find(|&e| {
                    let v = self.mesh.edge(e).vertices;
                    (v[0] == a && v[1] == b) || (v[0] == b && v[1] == a)
                })
                .unwrap()
        })
    }

    /// `(u, grad u, laplacian u)` of the Bernardi-Raugel field at `x`.
    fn u_b(&self, t: usize, x: P) -> (P, [[f64; 2]; 2], P) {
        let loc = Local::new(self.mesh, t);
        let l = loc.bary(x);
        let layout = self.space.layout();
        let tri = self.mesh.triangle(t).vertices;
        let edges = self.edges(t);
        let mut u = [0.0; 2];
        let mut g = [[0.0; 2]; 2];
        let mut lap = [0.0; 2];
        for i in 0..3 {
            let d = layout.b_vertex[tri[i]];
            let val = [self.x[d], self.x[d + 1]];
            for a in 0..2 {
                u[a] += val[a] * l[i];
                for b in 0..2 {
                    g[a][b] += val[a] * loc.grad[i][b];
                }
            }
        }
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let e = edges[i];
            let c = self.x[layout.b_bubble[e]];
            let n = self.mesh.edge_normal(e);
            let phi = l[j] * l[k];
            let dphi = [0, 1].map(|b| l[k] * loc.grad[j][b] + l[j] * loc.grad[k][b]);
            let lphi = 2.0 * dot(loc.grad[j], loc.grad[k]);
            for a in 0..2 {
                u[a] += c * phi * n[a];
                lap[a] += c * lphi * n[a];
                for b in 0..2 {
                    g[a][b] += c * n[a] * dphi[b];
                }
            }
        }
        (u, g, lap)
    }

    /// `(u, div u)` of the Raviart-Thomas field at `x`.
    fn u_d(&self, t: usize, x: P) -> (P, f64) {
        let loc = Local::new(self.mesh, t);
        let layout = self.space.layout();
        let edges = self.edges(t);
        let mut u = [0.0; 2];
        let mut div = 0.0;
        for i in 0..3 {
            let e = edges[i];
            let a = loc.c[(i + 1) % 3];
            let b = loc.c[(i + 2) % 3];
            let d = sub(b, a);
            let len = nsq(d).sqrt();
            let n_out = [d[1] / len, -d[0] / len];
            let sign = dot(n_out, self.mesh.edge_normal(e)).signum();
            let c = self.x[layout.d_edge[e]] * sign;
            for k in 0..2 {
                u[k] += c * (x[k] - loc.c[i][k]) / (2.0 * loc.area);
            }
            div += c / loc.area;
        }
        (u, div)
    }

    fn p(&self, t: usize) -> f64 {
        self.x[self.space.layout().pressure_dof(t)]
    }

    /// `(lambda, d lambda / dt)` at `x` on interface edge `e`, with `t` the
    /// edge tangent.
    fn lambda(&self, e: usize, x: P) -> (f64, f64) {
        let mesh = self.mesh;
        let pairs = mesh.interface_pairs();
        let k = pairs.iter().position(|m| m.edges.contains(&e)).unwrap();
        let m = pairs[k];
        let (a, b) = (mesh.vertex(m.vertices[0]), mesh.vertex(m.vertices[2]));
        let mid = mesh.vertex(m.vertices[1]);
        let l0 = nsq(sub(mid, a)).sqrt();
        let l1 = nsq(sub(b, mid)).sqrt();
        let total = l0 + l1;
        let (s, dir) = if m.edges[0] == e {
            (nsq(sub(x, a)).sqrt(), sub(mid, a).map(|v| v / l0))
        } else {
            (l0 + nsq(sub(x, mid)).sqrt(), sub(b, mid).map(|v| v / l1))
        };
        let layout = self.space.layout();
        let (v0, v1) = (self.x[layout.multiplier_dof(k)], self.x[layout.multiplier_dof(k + 1)]);
        let w = s / total;
        let tan = mesh.edge_tangent(e);
        (v0 * (1.0 - w) + v1 * w, (v1 - v0) / total * dot(dir, tan))
    }
}

/// Brute-force squared terms of triangle `t`, indexed like [`Term`].
fn oracle_terms(
    f: &Fields,
    coeffs: &ProblemCoefficients<f64>,
    bc: &BoundaryData<f64>,
    t: usize,
) -> [f64; 13] {
    let mesh = f.mesh;
    let vol = grundmann_moller(6);
    let line = gauss_legendre(10);
    let loc = Local::new(mesh, t);
    let c = loc.c;
    let h = [0, 1, 2].iter().map(|&i| nsq(sub(c[i], c[(i + 1) % 3])).sqrt()).fold(0.0, f64::max);
    let mu = coeffs.mu;
    let kb = *coeffs.k_b.inverse();
    let kd = *coeffs.k_d.inverse();
    let mv = |m: [[f64; 2]; 2], v: P| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
    let stress_n = |g: [[f64; 2]; 2], p: f64, n: P| {
        [mu * (g[0][0] * n[0] + g[0][1] * n[1]) - p * n[0], mu * (g[1][0] * n[0] + g[1][1] * n[1]) - p * n[1]]
    };
    let darcy = |tt: usize, x: P| sub((coeffs.f_d)(x), mv(kd, f.u_d(tt, x).0));
    let mut out = [0.0; 13];
    let sub_t = mesh.triangle(t).subdomain;
    for (l, w) in &vol {
        let x = loc.point(*l);
        let w = w * loc.area;
        match sub_t {
            Subdomain::Brinkman => {
                let (u, g, lap) = f.u_b(t, x);
                let div = g[0][0] + g[1][1];
                out[Term::BDivergence.index()] += w * div * div;
                let un = nsq(u).sqrt().powf(coeffs.rho - 2.0);
                let fb = (coeffs.f_b)(x);
                let ku = mv(kb, u);
                let r = [0, 1].map(|k| fb[k] + mu * lap[k] - ku[k] - coeffs.forchheimer * un * u[k]);
                out[Term::BBulk.index()] += w * h * h * nsq(r);
            }
            Subdomain::Darcy => {
                let (_, div) = f.u_d(t, x);
                let m = (coeffs.g_d)(x) - div;
                out[Term::DMass.index()] += w * m * m;
                out[Term::DBulk.index()] += w * h * h * nsq(darcy(t, x));
                let rot = (coeffs.rot_f_d.as_ref().unwrap())(x);
                out[Term::DRot.index()] += w * h * h * rot * rot;
            }
        }
    }
    for (i, e) in f.edges(t).into_iter().enumerate() {
        let a = c[(i + 1) % 3];
        let b = c[(i + 2) % 3];
        let len = nsq(sub(b, a)).sqrt();
        let n = mesh.edge_normal(e);
        let tan = [-n[1], n[0]];
        let edge = mesh.edge(e);
        let integrate = |g: &dyn Fn(P) -> f64| -> f64 {
            line.iter().map(|&(s, w)| w * len * g([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])])).sum()
        };
        // evaluation points on the edge sit on the closure of both neighbours
        match edge.kind {
            EdgeKind::Interior(Subdomain::Brinkman) => {
                let other = edge.triangles.iter().flatten().copied().find(|&o| o != t).unwrap();
                out[Term::BJump.index()] += len
                    * integrate(&|x| {
                        let s0 = stress_n(f.u_b(t, x).1, f.p(t), n);
                        let s1 = stress_n(f.u_b(other, x).1, f.p(other), n);
                        nsq(sub(s0, s1))
                    });
            }
            EdgeKind::Interior(Subdomain::Darcy) => {
                let other = edge.triangles.iter().flatten().copied().find(|&o| o != t).unwrap();
                out[Term::DJump.index()] += len
                    * integrate(&|x| {
                        let j = dot(sub(darcy(t, x), darcy(other, x)), tan);
                        j * j
                    });
            }
            EdgeKind::Interface => {
                let tb = edge.triangles[0].unwrap();
                let td = edge.triangles[1].unwrap();
                if sub_t == Subdomain::Brinkman {
                    out[Term::BInterface.index()] += len
                        * integrate(&|x| {
                            let (lam, _) = f.lambda(e, x);
                            let tau = bc.interface_traction.as_ref().map_or([0.0; 2], |g| g(x));
                            let s = stress_n(f.u_b(tb, x).1, f.p(tb), n);
                            nsq([s[0] + lam * n[0] - tau[0], s[1] + lam * n[1] - tau[1]])
                        });
                } else {
                    out[Term::DInterfaceTangential.index()] += len
                        * integrate(&|x| {
                            let r = dot(darcy(td, x), tan) - f.lambda(e, x).1;
                            r * r
                        });
                    out[Term::DInterfacePressure.index()] += len
                        * integrate(&|x| {
                            let r = f.lambda(e, x).0 - f.p(td);
                            r * r
                        });
                    out[Term::DInterfaceMass.index()] += len
                        * integrate(&|x| {
                            let j = bc.interface_flux.as_ref().map_or(0.0, |g| g(x));
                            let r = dot(sub(f.u_b(tb, x).0, f.u_d(td, x).0), n) - j;
                            r * r
                        });
                }
            }
            EdgeKind::Boundary(Subdomain::Brinkman, tag) => {
                out[Term::BBoundary.index()] += if bc.variant.is_b_dirichlet(tag) {
                    integrate(&|x| nsq(sub(f.u_b(t, x).0, (bc.velocity_b)(x)))) / len
                } else {
                    len * integrate(&|x| nsq(stress_n(f.u_b(t, x).1, f.p(t), n)))
                };
            }
            EdgeKind::Boundary(Subdomain::Darcy, tag) => {
                out[Term::DBoundary.index()] += if bc.variant.is_d_flux(tag) {
                    len * integrate(&|x| {
                        let r = dot(sub(f.u_d(t, x).0, (bc.velocity_d)(x)), n);
                        r * r
                    })
                } else {
                    len * integrate(&|x| {
                        let r = dot(darcy(t, x), tan);
                        r * r
                    })
                };
            }
        }
    }
    out
}

/// Polynomial data: quadratic loads, a cubic-free Forchheimer exponent
/// (`rho = 4`) and anisotropic permeabilities.
fn polynomial_data(variant: BcVariant) -> (ProblemCoefficients<f64>, BoundaryData<f64>) {
    let k_b = SpdTensor::from_matrix([[2.0, 0.5], [0.5, 1.0]]).unwrap();
    let k_d = SpdTensor::from_matrix([[0.5, 0.1], [0.1, 0.25]]).unwrap();
    let mut coeffs = ProblemCoefficients::homogeneous(1.3, 10.0, 4.0, k_b, k_d);
    coeffs.f_b = Arc::new(|x: P| [1.0 + x[0] * x[1], x[0] * x[0] - 2.0 * x[1]]);
    coeffs.f_d = Arc::new(|x: P| [x[1] * x[1] - x[0], 0.5 + x[0] * x[1]]);
    // rot f_D = d(0.5 + x y)/dx - d(y^2 - x)/dy
    coeffs.rot_f_d = Some(Arc::new(|x: P| x[1] - 2.0 * x[1]));
    coeffs.g_d = Arc::new(|x: P| 1.0 + x[0] - x[1] * x[1]);
    let bc = BoundaryData {
        velocity_b: Arc::new(|x: P| [x[1] * (1.0 - x[1]), 0.3 * x[0]]),
        velocity_d: Arc::new(|x: P| [x[0] * x[1], 1.0 - x[0]]),
        interface_traction: Some(Arc::new(|x: P| [0.2 * x[0], 1.0 - x[0] * x[0]])),
        interface_flux: Some(Arc::new(|x: P| 0.5 * x[0] - 0.1)),
        ..BoundaryData::homogeneous(variant)
    };
    (coeffs, bc)
}

fn tag_of(a: P, b: P) -> BoundaryTag {
    if a[0] == 0.0 && b[0] == 0.0 {
        BoundaryTag::Left
    } else if a[1] == 0.0 && b[1] == 0.0 {
        BoundaryTag::Bottom
    } else if a[1] == b[1] {
        BoundaryTag::Top
    } else {
        BoundaryTag::Right
    }
}

fn tri(v: [usize; 3], sub: Subdomain) -> Triangle {
    Triangle { vertices: v, subdomain: sub }
}

/// The small meshes of the oracle comparison.
pub fn oracle_meshes() -> Vec<(&'static str, CoupledMesh<f64>)> {
    use Subdomain::{Brinkman as B, Darcy as D};
    let unit = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
    let square = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let strip = vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 1.0], [1.0, -1.0]];
    vec![
        ("single Brinkman triangle", CoupledMesh::from_triangles(unit.clone(), vec![tri([0, 1, 2], B)], tag_of)),
        ("single Darcy triangle", CoupledMesh::from_triangles(unit, vec![tri([0, 1, 2], D)], tag_of)),
        (
            "two Brinkman triangles",
            CoupledMesh::from_triangles(square.clone(), vec![tri([0, 1, 2], B), tri([0, 2, 3], B)], tag_of),
        ),
        ("two Darcy triangles", CoupledMesh::from_triangles(square, vec![tri([0, 1, 2], D), tri([0, 2, 3], D)], tag_of)),
        (
            "two interface pairs",
            CoupledMesh::from_triangles(
                strip,
                vec![tri([0, 1, 3], B), tri([1, 2, 3], B), tri([0, 4, 1], D), tri([1, 4, 2], D)],
                tag_of,
            ),
        ),
    ]
    .into_iter()
    .map(|(name, m)| (name, m.expect("oracle mesh is valid")))
    .collect()
}

/// Compares every term on every oracle mesh, for both boundary-condition
/// variants and several random coefficient vectors; returns the largest
/// relative deviation.
pub fn estimator_oracle(tol: f64) -> Check {
    let variants = [
        BcVariant::Standard,
        BcVariant::Alternative { b_dirichlet: vec![BoundaryTag::Left], d_flux: vec![BoundaryTag::Left] },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for (name, mesh) in oracle_meshes() {
        for variant in &variants {
            let (coeffs, bc) = polynomial_data(variant.clone());
            let space = Arc::new(FeSpace::new(mesh.clone(), variant));
            for _ in 0..3 {
                let x: Vec<f64> = (0..space.num_dofs()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let sol = CoupledSolution::new(space.clone(), x.clone());
                let field = estimate(&sol, &coeffs, &bc);
                let fields = Fields { mesh: &mesh, space: &space, x: &x };
                for t in 0..mesh.num_triangles() {
                    let expect = oracle_terms(&fields, &coeffs, &bc, t);
                    for term in Term::ALL {
                        let (got, want) = (field.term(t, term), expect[term.index()]);
                        let dev = (got - want).abs() / want.abs().max(1e-300);
                        let dev = if want == 0.0 && got == 0.0 { 0.0 } else { dev };
                        if !(dev <= tol) {
                            return Err(format!(
                                "{name}, {variant:?}, triangle {t}, {}: estimator {got:e} vs oracle {want:e}",
                                term.name()
                            ));
                        }
                        worst = worst.max(dev);
                        compared += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{compared} term values compared, largest relative deviation {worst:.2e}"))
}
