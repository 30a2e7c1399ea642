//! Hyper-dual numbers `a + b e1 + c e2 + d e1 e2` with `e1^2 = e2^2 = 0`:
//! one evaluation yields a value, two first derivatives and a mixed second
//! derivative, all free of truncation error.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hd {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Hd {
    pub fn cst(a: f64) -> Self {
        Hd { a, b: 0.0, c: 0.0, d: 0.0 }
    }

    /// Chain rule for a scalar function with value `f0`, derivative `f1`
    /// and second derivative `f2` at `self.a`.
    fn lift(self, f0: f64, f1: f64, f2: f64) -> Self {
        Hd { a: f0, b: f1 * self.b, c: f1 * self.c, d: f1 * self.d + f2 * self.b * self.c }
    }

    pub fn sin(self) -> Self {
        self.lift(self.a.sin(), self.a.cos(), -self.a.sin())
    }

    pub fn cos(self) -> Self {
        self.lift(self.a.cos(), -self.a.sin(), -self.a.cos())
    }

    pub fn exp(self) -> Self {
        let e = self.a.exp();
        self.lift(e, e, e)
    }

    pub fn powf(self, k: f64) -> Self {
        let a = self.a;
        self.lift(a.powf(k), k * a.powf(k - 1.0), k * (k - 1.0) * a.powf(k - 2.0))
    }

    pub fn sqrt(self) -> Self {
        self.powf(0.5)
    }
}

impl Add for Hd {
    type Output = Hd;
    fn add(self, o: Hd) -> Hd {
        Hd { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c, d: self.d + o.d }
    }
}

impl Sub for Hd {
    type Output = Hd;
    fn sub(self, o: Hd) -> Hd {
        self + (-o)
    }
}

impl Neg for Hd {
    type Output = Hd;
    fn neg(self) -> Hd {
        Hd { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl Mul for Hd {
    type Output = Hd;
    fn mul(self, o: Hd) -> Hd {
        Hd {
            a: self.a * o.a,
            b: self.a * o.b + self.b * o.a,
            c: self.a * o.c + self.c * o.a,
            d: self.a * o.d + self.b * o.c + self.c * o.b + self.d * o.a,
        }
    }
}

impl Div for Hd {
    type Output = Hd;
    fn div(self, o: Hd) -> Hd {
        let inv = o.lift(1.0 / o.a, -1.0 / (o.a * o.a), 2.0 / (o.a * o.a * o.a));
        self * inv
    }
}

impl Add<f64> for Hd {
    type Output = Hd;
    fn add(self, o: f64) -> Hd {
        self + Hd::cst(o)
    }
}

impl Mul<Hd> for f64 {
    type Output = Hd;
    fn mul(self, o: Hd) -> Hd {
        Hd::cst(self) * o
    }
}

/// The point `x` seeded so that `b` carries `d/dx_i` and `c` carries `d/dx_j`.
pub fn seed(x: [f64; 2], i: usize, j: usize) -> [Hd; 2] {
    let mut out = [Hd::cst(x[0]), Hd::cst(x[1])];
    out[i].b = 1.0;
    out[j].c = 1.0;
    out
}

/// Value, gradient and Hessian of a scalar field at `x`.
pub fn jet(f: impl Fn([Hd; 2]) -> Hd, x: [f64; 2]) -> (f64, [f64; 2], [[f64; 2]; 2]) {
    let mut grad = [0.0; 2];
    let mut hess = [[0.0; 2]; 2];
    let mut value = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let r = f(seed(x, i, j));
            value = r.a;
            grad[i] = r.b;
            hess[i][j] = r.d;
        }
    }
    (value, grad, hess)
}
