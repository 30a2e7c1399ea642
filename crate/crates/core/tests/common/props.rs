//! Property checks that need no reference data.

use std::sync::Arc;

use bfd_core::assembly::{forchheimer_term, Assembler, BoundaryData, ProblemCoefficients};
use bfd_core::estimator::{estimate, EstimatorField, NUM_TERMS};
use bfd_core::geometry::SpdTensor;
use bfd_core::mesh::{DomainLayout, Subdomain};
use bfd_core::nlsolve::{self, NewtonConfig};
use bfd_core::problems::{ProblemDefinition, ProblemName};
use bfd_core::quadrature::TriangleRule;
use bfd_core::spaces::{BcVariant, Block, CoupledSolution, FeSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Check;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn initial_space(p: &ProblemDefinition<f64>) -> Arc<FeSpace<f64>> {
    Arc::new(FeSpace::new(p.initial_mesh().unwrap(), &p.boundary.variant))
}

/// Directional finite differences of the operator `a` against its Jacobian
/// at `states` random states on the initial mesh of every example; the
/// error must decay at first order in the step.
pub fn jacobian_fd(states: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut orders = Vec::new();
    for name in ProblemName::ALL {
        let problem = name.build::<f64>(None);
        let space = initial_space(&problem);
        let asm = Assembler::new(&space, &problem.coefficients);
        let n = space.num_dofs();
        for s in 0..states {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let jv = asm.jacobian_a(&x).matvec(&v);
            let ax = asm.apply_a(&x);
            let err = |eps: f64| {
                let xe: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + eps * b).collect();
                let d: Vec<f64> = asm.apply_a(&xe).iter().zip(&ax).zip(&jv).map(|((a, b), j)| (a - b) / eps - j).collect();
                norm(&d) / norm(&jv)
            };
            let (e1, e2) = (err(1e-4), err(1e-5));
            let order = (e1 / e2).log10();
            if !(e1 < 1e-2 && (0.8..=1.2).contains(&order)) {
                return Err(format!("{name} state {s}: errors {e1:e}, {e2:e}, observed order {order:.3}"));
            }
            orders.push(order);
        }
    }
    let (lo, hi) = orders.iter().fold((f64::MAX, f64::MIN), |(a, b), &o| (a.min(o), b.max(o)));
    Ok(format!("{} states, observed orders in [{lo:.3}, {hi:.3}]", orders.len()))
}

/// Quadrature pieces of `[a(x) - a(y), x - y]` for one pair.
struct MonotoneParts {
    viscous: f64,
    drag_b: f64,
    forchheimer: f64,
    drag_d: f64,
    h1_b: f64,
    l2_d: f64,
}

fn monotone_parts(c: &ProblemCoefficients<f64>, x: &CoupledSolution<f64>, y: &CoupledSolution<f64>, w: &CoupledSolution<f64>) -> MonotoneParts {
    let mesh = x.mesh();
    let rule = TriangleRule::<f64>::dunavant8();
    let mut p = MonotoneParts { viscous: 0.0, drag_b: 0.0, forchheimer: 0.0, drag_d: 0.0, h1_b: 0.0, l2_d: 0.0 };
    for t in 0..mesh.num_triangles() {
        let geom = x.space().geometry(t);
        for (b, &wt) in rule.points.iter().zip(&rule.weights) {
            let wt = wt * geom.area;
            match mesh.triangle(t).subdomain {
                Subdomain::Brinkman => {
                    let (du, dg) = w.u_b(t, *b);
                    let g2: f64 = dg.iter().flatten().map(|v| v * v).sum();
                    let kw = c.k_b.apply_inverse(du);
                    p.viscous += wt * c.mu * g2;
                    p.drag_b += wt * (kw[0] * du[0] + kw[1] * du[1]);
                    p.h1_b += wt * (g2 + du[0] * du[0] + du[1] * du[1]);
                    let fx = forchheimer_term(c.forchheimer, c.rho, x.u_b(t, *b).0);
                    let fy = forchheimer_term(c.forchheimer, c.rho, y.u_b(t, *b).0);
                    p.forchheimer += wt * ((fx[0] - fy[0]) * du[0] + (fx[1] - fy[1]) * du[1]);
                }
                Subdomain::Darcy => {
                    let pt = geom.point(*b);
                    let du = w.u_d(t, pt);
                    let kw = c.k_d.apply_inverse(du);
                    p.drag_d += wt * (kw[0] * du[0] + kw[1] * du[1]);
                    p.l2_d += wt * (du[0] * du[0] + du[1] * du[1]);
                }
            }
        }
    }
    p
}

/// Strong monotonicity of `a` on `pairs` random pairs, term by term:
/// the viscous-plus-drag part of the Brinkman block dominates
/// `min(mu, C_KB) |x_B - y_B|_1^2`, the Forchheimer part is nonnegative, the
/// Darcy drag dominates `C_KD |x_D - y_D|_0^2`, the parts add up to the
/// assembled pairing, and the total dominates `gamma |x - y|^2`.
pub fn monotonicity(pairs: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut min_ratio = f64::MAX;
    let problems = [ProblemName::Example1, ProblemName::Example2, ProblemName::Example3];
    for k in 0..pairs {
        let problem = problems[k % 3].build::<f64>(None);
        let c = &problem.coefficients;
        let space = initial_space(&problem);
        let asm = Assembler::new(&space, c);
        let n = space.num_dofs();
        let scale = [0.01, 1.0, 10.0][k % 3];
        let x: Vec<f64> = (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
        let w: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let (ax, ay) = (asm.apply_a(&x), asm.apply_a(&y));
        let pairing: f64 = ax.iter().zip(&ay).zip(&w).map(|((a, b), d)| (a - b) * d).sum();
        let sol = |v: &Vec<f64>| CoupledSolution::new(space.clone(), v.clone());
        let p = monotone_parts(c, &sol(&x), &sol(&y), &sol(&w));
        let (ckb, ckd) = (c.k_b.coercivity(), c.k_d.coercivity());
        let gamma = c.mu.min(ckb).min(ckd);
        let slack = 1e-12;
        if p.viscous + p.drag_b < c.mu.min(ckb) * p.h1_b * (1.0 - slack) {
            return Err(format!("pair {k}: Brinkman linear part below its bound"));
        }
        if p.forchheimer < -slack * p.forchheimer.abs() {
            return Err(format!("pair {k}: Forchheimer pairing {:e} is negative", p.forchheimer));
        }
        if p.drag_d < ckd * p.l2_d * (1.0 - slack) {
            return Err(format!("pair {k}: Darcy drag below its bound"));
        }
        let parts = p.viscous + p.drag_b + p.forchheimer + p.drag_d;
        if (parts - pairing).abs() > 1e-9 * pairing.abs() {
            return Err(format!("pair {k}: parts {parts:e} vs assembled pairing {pairing:e}"));
        }
        let bound = gamma * (p.h1_b + p.l2_d);
        if pairing < bound * (1.0 - slack) {
            return Err(format!("pair {k}: pairing {pairing:e} below gamma bound {bound:e}"));
        }
        min_ratio = min_ratio.min(pairing / bound);
    }
    Ok(format!("{pairs} pairs, smallest [a(x)-a(y),x-y] / (gamma |x-y|^2) = {min_ratio:.3}"))
}

fn solve(problem: &ProblemDefinition<f64>, refinements: usize) -> CoupledSolution<f64> {
    let mut mesh = problem.initial_mesh().unwrap();
    for _ in 0..refinements {
        mesh = mesh.refine_uniform().unwrap();
    }
    let space = Arc::new(FeSpace::new(mesh, &problem.boundary.variant));
    nlsolve::solve(&space, &problem.coefficients, &problem.boundary, NewtonConfig::default()).unwrap().0
}

/// Post-solve residual functionals: `R_f(v_h)` over free velocity basis
/// functions, `R_g(q_h, xi_h)` over mean-free pressures and multipliers,
/// relative to the size of the load and operator terms.
pub fn galerkin_orthogonality(tol: f64) -> Check {
    let mut worst: f64 = 0.0;
    for name in ProblemName::ALL {
        let problem = name.build::<f64>(None);
        let sol = solve(&problem, 1);
        let space = sol.space();
        let asm = Assembler::new(space, &problem.coefficients);
        let rhs = asm.assemble_rhs(&problem.boundary);
        let x = &sol.coeffs;
        let res = asm.residual(x, &rhs);
        let lx = asm.linear_operator().matvec(x);
        let scale = rhs.iter().chain(&lx).fold(0.0f64, |a, b| a.max(b.abs()));
        let layout = space.layout();
        let mut r_f: f64 = 0.0;
        for i in layout.range(Block::VelocityB).chain(layout.range(Block::VelocityD)) {
            if !layout.constrained[i] {
                r_f = r_f.max(res[i].abs());
            }
        }
        let pr = layout.range(Block::Pressure);
        let mesh = space.mesh();
        let m: Vec<f64> = (0..mesh.num_triangles()).map(|t| mesh.area(t)).collect();
        let rp: Vec<f64> = res[pr.clone()].to_vec();
        // remove the component along the constants when the pressure is mean-free
        let shift = if layout.bc.needs_mean_constraint() {
            rp.iter().zip(&m).map(|(r, a)| r * a).sum::<f64>() / m.iter().map(|a| a * a).sum::<f64>()
        } else {
            0.0
        };
        let mut r_g: f64 = rp.iter().zip(&m).map(|(r, a)| (r - shift * a).abs()).fold(0.0, f64::max);
        for i in layout.range(Block::Multiplier) {
            r_g = r_g.max(res[i].abs());
        }
        let rel = r_f.max(r_g) / scale;
        if !(rel <= tol) {
            return Err(format!("{name}: |R_f| = {r_f:e}, |R_g| = {r_g:e}, scale {scale:e}"));
        }
        worst = worst.max(rel);
    }
    Ok(format!("largest relative residual functional {worst:.2e}"))
}

/// `div u_D,h` equals the mean of `g_D` on every Darcy triangle.
pub fn darcy_divergence(tol: f64) -> Check {
    let rule = TriangleRule::<f64>::collapsed_gauss(8);
    let mut worst: f64 = 0.0;
    for name in ProblemName::ALL {
        let problem = name.build::<f64>(None);
        let sol = solve(&problem, 1);
        let mesh = sol.mesh();
        for t in mesh.triangles_in(Subdomain::Darcy) {
            let geom = sol.space().geometry(t);
            let mean: f64 = rule.points.iter().zip(&rule.weights).map(|(b, w)| w * (problem.coefficients.g_d)(geom.point(*b))).sum();
            let d = (sol.div_u_d(t) - mean).abs();
            if !(d <= tol) {
                return Err(format!("{name}, triangle {t}: div u_D = {}, mean g_D = {mean}", sol.div_u_d(t)));
            }
            worst = worst.max(d);
        }
    }
    Ok(format!("largest |div u_D,h - mean g_D| = {worst:.2e}"))
}

/// Zero data gives the zero solution and a vanishing estimator, for both
/// boundary-condition variants.
pub fn zero_data() -> Check {
    let variants = [
        BcVariant::Standard,
        BcVariant::Alternative {
            b_dirichlet: vec![bfd_core::BoundaryTag::Left, bfd_core::BoundaryTag::Top],
            d_flux: vec![bfd_core::BoundaryTag::Left, bfd_core::BoundaryTag::Right],
        },
    ];
    for variant in variants {
        let coeffs = ProblemCoefficients::homogeneous(1.0, 10.0, 3.0, SpdTensor::isotropic(1.0), SpdTensor::isotropic(0.5));
        let bc = BoundaryData::homogeneous(variant.clone());
        let mesh = DomainLayout::stacked(0.0, 1.0, -1.0, 0.0, 1.0, 4, 4, 4).build().unwrap();
        let space = Arc::new(FeSpace::new(mesh, &variant));
        let (sol, _) = nlsolve::solve(&space, &coeffs, &bc, NewtonConfig::default()).map_err(|e| e.to_string())?;
        if sol.coeffs.iter().any(|&v| v != 0.0) {
            return Err(format!("{variant:?}: nonzero solution"));
        }
        let theta = estimate(&sol, &coeffs, &bc).global();
        if theta != 0.0 {
            return Err(format!("{variant:?}: Theta = {theta:e}"));
        }
    }
    Ok("zero solution and Theta = 0 for both boundary variants".into())
}

/// `Theta_BFD^2` is the sum of the stored local squares, and each local
/// square is the sum of its stored terms.
pub fn pythagorean() -> Check {
    let field = EstimatorField::from_terms(vec![Subdomain::Brinkman, Subdomain::Darcy], {
        let mut a = [0.0; NUM_TERMS];
        a[1] = 9.0;
        let mut b = [0.0; NUM_TERMS];
        b[5] = 16.0;
        vec![a, b]
    });
    if field.global() != 5.0 {
        return Err(format!("3-4-5 example gives {}", field.global()));
    }
    let problem = ProblemName::Example1.build::<f64>(None);
    let sol = solve(&problem, 0);
    let field = estimate(&sol, &problem.coefficients, &problem.boundary);
    let mut total = 0.0;
    for t in 0..field.num_triangles() {
        let local: f64 = field.terms(t).iter().sum();
        if local != field.local_squared(t) {
            return Err(format!("triangle {t}: terms sum to {local:e}, stored {:e}", field.local_squared(t)));
        }
        total += local;
    }
    if total.sqrt() != field.global() {
        return Err(format!("global {:e} vs recomputed {:e}", field.global(), total.sqrt()));
    }
    let split = (field.subdomain_squared(Subdomain::Brinkman) + field.subdomain_squared(Subdomain::Darcy)).sqrt();
    if (split - field.global()).abs() > 1e-14 * field.global() {
        return Err("subdomain split disagrees".into());
    }
    Ok(format!("Theta_BFD = {:.6e} reproduced exactly", field.global()))
}
