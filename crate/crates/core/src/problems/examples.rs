use std::sync::Arc;

use super::{ExactSolution, MatrixField, ProblemDefinition};
use crate::assembly::{forchheimer_term, BoundaryData, ProblemCoefficients, ScalarField, VectorField};
use crate::geometry::{self, Point, SpdTensor, Vec2};
use crate::mesh::{BoundaryTag, DomainLayout, Subdomain};
use crate::scalar::Real;
use crate::spaces::BcVariant;

/// Manufactured-solution ingredients from which data are derived.
struct Manufactured<T> {
    mu: T,
    forchheimer: T,
    rho: T,
    k_b: T,
    k_d: T,
    u_b: VectorField<T>,
    grad_u_b: MatrixField<T>,
    lap_u_b: VectorField<T>,
    u_d: VectorField<T>,
    div_u_d: ScalarField<T>,
    rot_u_d: ScalarField<T>,
    p: ScalarField<T>,
    grad_p: VectorField<T>,
    /// Fixed unit normal of the (straight) interface, pointing into the Darcy region.
    normal: Vec2<T>,
}

impl<T: Real> Manufactured<T> {
    fn into_problem(self, name: &str, layout: DomainLayout<T>) -> ProblemDefinition<T> {
        let Manufactured { mu, forchheimer, rho, k_b, k_d, u_b, grad_u_b, lap_u_b, u_d, div_u_d, rot_u_d, p, grad_p, normal } =
            self;
        let kb_inv = T::one() / k_b;
        let kd_inv = T::one() / k_d;

        let f_b: VectorField<T> = {
            let (u_b, lap, grad_p) = (u_b.clone(), lap_u_b.clone(), grad_p.clone());
            Arc::new(move |x| {
                let u = u_b(x);
                let drag = geometry::scale(kb_inv, u);
                let nl = forchheimer_term(forchheimer, rho, u);
                let visc = geometry::scale(-mu, lap(x));
                geometry::add(geometry::add(drag, nl), geometry::add(visc, grad_p(x)))
            })
        };
        let f_d: VectorField<T> = {
            let (u_d, grad_p) = (u_d.clone(), grad_p.clone());
            Arc::new(move |x| geometry::add(geometry::scale(kd_inv, u_d(x)), grad_p(x)))
        };
        let rot_f_d: ScalarField<T> = Arc::new(move |x| kd_inv * rot_u_d(x));
        // sigma_B n + p_D n = mu grad(u_B) n, since the pressure is continuous
        let traction: VectorField<T> = {
            let grad = grad_u_b.clone();
            Arc::new(move |x| geometry::scale(mu, geometry::mat_vec(&grad(x), normal)))
        };
        let mass: ScalarField<T> = {
            let (u_b, u_d) = (u_b.clone(), u_d.clone());
            Arc::new(move |x| geometry::dot(geometry::sub(u_b(x), u_d(x)), normal))
        };

        ProblemDefinition {
            name: name.to_string(),
            layout,
            coefficients: ProblemCoefficients {
                mu,
                forchheimer,
                rho,
                k_b: SpdTensor::isotropic(k_b),
                k_d: SpdTensor::isotropic(k_d),
                f_b,
                f_d,
                g_d: div_u_d.clone(),
                rot_f_d: Some(rot_f_d),
            },
            boundary: BoundaryData {
                variant: BcVariant::Standard,
                velocity_b: u_b.clone(),
                velocity_d: u_d.clone(),
                interface_traction: Some(traction),
                interface_flux: Some(mass),
            },
            exact: Some(ExactSolution { u_b, grad_u_b, u_d, div_u_d, p, grad_p }),
        }
    }
}

/// Smooth solution on `(0,1) x (1,2)` over `(0,1)^2` with inhomogeneous
/// boundary data and a momentum mismatch on the interface.
pub fn example1<T: Real>() -> ProblemDefinition<T> {
    example1_with_rho(T::lit(3.0))
}

pub fn example1_with_rho<T: Real>(rho: T) -> ProblemDefinition<T> {
    let pi = T::PI();
    let u_b = move |p: Point<T>| {
        let (sx, cx, sy, cy) = ((pi * p[0]).sin(), (pi * p[0]).cos(), (pi * p[1]).sin(), (pi * p[1]).cos());
        [-sx * cy, cx * sy]
    };
    let two_pi_sq = T::lit(2.0) * pi * pi;
    let m = Manufactured {
        mu: T::one(),
        forchheimer: T::lit(10.0),
        rho,
        k_b: T::one(),
        k_d: T::lit(0.5),
        u_b: Arc::new(u_b),
        grad_u_b: Arc::new(move |p| {
            let (sx, cx, sy, cy) = ((pi * p[0]).sin(), (pi * p[0]).cos(), (pi * p[1]).sin(), (pi * p[1]).cos());
            [[-pi * cx * cy, pi * sx * sy], [-pi * sx * sy, pi * cx * cy]]
        }),
        lap_u_b: Arc::new(move |p| geometry::scale(-two_pi_sq, u_b(p))),
        u_d: Arc::new(move |p| [(pi * p[0]).sin() * p[1].exp(), p[0].exp() * (pi * p[1]).sin()]),
        div_u_d: Arc::new(move |p| pi * (pi * p[0]).cos() * p[1].exp() + pi * p[0].exp() * (pi * p[1]).cos()),
        rot_u_d: Arc::new(move |p| p[0].exp() * (pi * p[1]).sin() - (pi * p[0]).sin() * p[1].exp()),
        p: Arc::new(move |p| p[0] * (pi * p[1]).cos()),
        grad_p: Arc::new(move |p| [(pi * p[1]).cos(), -pi * p[0] * (pi * p[1]).sin()]),
        normal: [T::zero(), -T::one()],
    };
    let layout = DomainLayout::stacked(T::zero(), T::one(), T::zero(), T::one(), T::lit(2.0), 4, 4, 4);
    m.into_problem("example1", layout)
}

/// Helmet-shaped domain whose Brinkman velocity has steep gradients near
/// the two re-entrant corners.
pub fn example2<T: Real>() -> ProblemDefinition<T> {
    example2_with_rho(T::lit(3.5))
}

pub fn example2_with_rho<T: Real>(rho: T) -> ProblemDefinition<T> {
    let pi = T::PI();
    let centres = [[T::lit(-0.74), T::lit(0.26)], [T::lit(0.74), T::lit(0.26)]];
    // each centre contributes (Y/r, -X/r) with (X, Y) = x - centre
    let u_b = move |p: Point<T>| {
        let mut u = [T::zero(); 2];
        for c in centres {
            let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
            let r = (dx * dx + dy * dy).sqrt();
            u = geometry::add(u, [dy / r, -dx / r]);
        }
        u
    };
    let grad_u_b = move |p: Point<T>| {
        let mut g = [[T::zero(); 2]; 2];
        for c in centres {
            let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
            let r2 = dx * dx + dy * dy;
            let r3 = r2 * r2.sqrt();
            g[0][0] -= dx * dy / r3;
            g[0][1] += dx * dx / r3;
            g[1][0] -= dy * dy / r3;
            g[1][1] += dx * dy / r3;
        }
        g
    };
    let lap_u_b = move |p: Point<T>| {
        let mut l = [T::zero(); 2];
        for c in centres {
            let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
            let r2 = dx * dx + dy * dy;
            let r3 = r2 * r2.sqrt();
            l = geometry::add(l, [-dy / r3, dx / r3]);
        }
        l
    };
    let m = Manufactured {
        mu: T::one(),
        forchheimer: T::lit(10.0),
        rho,
        k_b: T::one(),
        k_d: T::lit(0.1),
        u_b: Arc::new(u_b),
        grad_u_b: Arc::new(grad_u_b),
        lap_u_b: Arc::new(lap_u_b),
        u_d: Arc::new(move |p| [(pi * p[0]).sin() * p[1], p[0] * (pi * p[1]).sin()]),
        div_u_d: Arc::new(move |p| pi * (pi * p[0]).cos() * p[1] + pi * p[0] * (pi * p[1]).cos()),
        rot_u_d: Arc::new(move |p| (pi * p[1]).sin() - (pi * p[0]).sin()),
        p: Arc::new(move |p| (pi * p[0]).sin() * p[1]),
        grad_p: Arc::new(move |p| [pi * (pi * p[0]).cos() * p[1], (pi * p[0]).sin()]),
        normal: [T::zero(), -T::one()],
    };
    m.into_problem("example2", helmet_layout())
}

/// `(-1,1) x (0,1.25)` minus `(-0.75,0.75) x (0.25,1.25)` over `(-1,1) x (-0.5,0)`,
/// on a grid of squares of side 1/8.
fn helmet_layout<T: Real>() -> DomainLayout<T> {
    let b = Some(Subdomain::Brinkman);
    let d = Some(Subdomain::Darcy);
    DomainLayout {
        xs: [-1.0, -0.75, 0.75, 1.0].map(T::lit).to_vec(),
        ys: [-0.5, 0.0, 0.25, 1.25].map(T::lit).to_vec(),
        cells: vec![d, d, d, b, b, b, b, None, b],
        x_subdivisions: vec![2, 12, 2],
        y_subdivisions: vec![4, 2, 8],
    }
}

/// Channel flow over a much less permeable porous bed, driven by a
/// parabolic inflow, with zero traction at the outlet and zero pressure at
/// the bottom.
pub fn example3<T: Real>() -> ProblemDefinition<T> {
    example3_with_rho(T::lit(4.0))
}

pub fn example3_with_rho<T: Real>(rho: T) -> ProblemDefinition<T> {
    let ten = T::lit(10.0);
    let mut coefficients = ProblemCoefficients::homogeneous(
        T::one(),
        T::lit(1e4),
        rho,
        SpdTensor::isotropic(T::lit(0.1)),
        SpdTensor::isotropic(T::lit(1e-3)),
    );
    coefficients.rot_f_d = Some(Arc::new(|_| T::zero()));
    let variant = BcVariant::Alternative {
        b_dirichlet: vec![BoundaryTag::Left, BoundaryTag::Top],
        d_flux: vec![BoundaryTag::Left, BoundaryTag::Right],
    };
    let boundary = BoundaryData {
        velocity_b: Arc::new(move |p: Point<T>| [-ten * p[1] * (p[1] - T::one()), T::zero()]),
        ..BoundaryData::homogeneous(variant)
    };
    ProblemDefinition {
        name: "example3".to_string(),
        layout: DomainLayout::stacked(T::zero(), T::lit(2.0), -T::one(), T::zero(), T::one(), 16, 8, 8),
        coefficients,
        boundary,
        exact: None,
    }
}
