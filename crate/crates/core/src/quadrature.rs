//! Quadrature rules on the reference triangle and the unit interval.
//!
//! Triangle rules are stored in barycentric coordinates with weights that sum
//! to one, so that `integral over T of f = |T| * sum_q w_q f(x_q)`. Line rules
//! are stored on `[0, 1]`, again with weights summing to one.

use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct TriangleRule<T> {
    pub points: Vec<[T; 3]>,
    pub weights: Vec<T>,
    pub degree: usize,
}

#[derive(Debug, Clone)]
pub struct LineRule<T> {
    pub points: Vec<T>,
    pub weights: Vec<T>,
    pub degree: usize,
}

impl<T: Real> TriangleRule<T> {
    /// Dunavant's symmetric 16-point rule, exact for polynomials of degree 8.
    pub fn dunavant8() -> Self {
        const CENTROID_W: f64 = 0.144_315_607_677_787;
        const ORBITS3: [(f64, f64); 3] = [
            (0.459_292_588_292_723, 0.095_091_634_267_285),
            (0.170_569_307_751_760, 0.103_217_370_534_718),
            (0.050_547_228_317_031, 0.032_458_497_623_198),
        ];
        const ORBIT6: (f64, f64, f64) = (0.008_394_777_409_958, 0.263_112_829_634_638, 0.027_230_314_174_435);

        let mut pts: Vec<[f64; 3]> = vec![[1.0 / 3.0; 3]];
        let mut wts = vec![CENTROID_W];
        for &(a, w) in &ORBITS3 {
            let b = 1.0 - 2.0 * a;
            pts.extend([[a, a, b], [a, b, a], [b, a, a]]);
            wts.extend([w; 3]);
        }
        let (a, b, w) = ORBIT6;
        let c = 1.0 - a - b;
        pts.extend([[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]);
        wts.extend([w; 6]);
        // The tabulated weights sum to one up to the last printed digit; renormalise.
        let total: f64 = wts.iter().sum();
        Self {
            points: pts.iter().map(|p| p.map(T::lit)).collect(),
            weights: wts.iter().map(|w| T::lit(w / total)).collect(),
            degree: 8,
        }
    }

    /// Conical-product (collapsed Gauss) rule with `n * n` points, exact for
    /// polynomials of total degree `2n - 2`.
    pub fn collapsed_gauss(n: usize) -> Self {
        let (x, w) = gauss_legendre_unit(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for i in 0..n {
            let s = x[i];
            for j in 0..n {
                let t = x[j];
                // (s, t) in the unit square -> (s, t (1 - s)) in the reference triangle.
                let xi = s;
                let eta = t * (1.0 - s);
                points.push([T::lit(1.0 - xi - eta), T::lit(xi), T::lit(eta)]);
                // Reference triangle area is 1/2, so normalised weight carries a factor 2.
                weights.push(T::lit(2.0 * w[i] * w[j] * (1.0 - s)));
            }
        }
        Self { points, weights, degree: 2 * n - 2 }
    }

    /// Rule exact for total degree `degree`; uses the Dunavant rule up to 8.
    pub fn of_degree(degree: usize) -> Self {
        if degree <= 8 {
            Self::dunavant8()
        } else {
            Self::collapsed_gauss(degree / 2 + 1)
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl<T: Real> LineRule<T> {
    /// `n`-point Gauss-Legendre rule on `[0, 1]`, exact for degree `2n - 1`.
    pub fn gauss(n: usize) -> Self {
        let (x, w) = gauss_legendre_unit(n);
        Self {
            points: x.into_iter().map(T::lit).collect(),
            weights: w.into_iter().map(T::lit).collect(),
            degree: 2 * n - 1,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gauss-Legendre nodes and weights mapped to `[0, 1]` (weights sum to one).
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature needs at least one point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
