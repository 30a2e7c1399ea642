//! Sparse direct solve of one Newton step.

use faer::prelude::*;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use log::warn;

use super::Penalty;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

/// Diagnostics of one linear solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearStats {
    pub size: usize,
    pub nnz: usize,
    pub refinement_steps: usize,
    /// Final `|A x - b| / |b|` for the penalised operator `A`.
    pub relative_residual: f64,
}

const TARGET_RESIDUAL: f64 = 1e-10;
const MAX_REFINEMENTS: usize = 4;

/// Low-rank correction turning the factorised matrix `M = J + alpha e e^T`
/// into `J - gamma m m^T` (Woodbury identity with `U = [e, m]`,
/// `C = diag(alpha, gamma)`).
struct LowRank<T> {
    pivot: usize,
    m: Vec<T>,
    /// `M^{-1} e` and `M^{-1} m`.
    z_e: Vec<T>,
    z_m: Vec<T>,
    /// Inverse of `C^{-1} - U^T M^{-1} U`.
    s_inv: [[T; 2]; 2],
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm<T: Real>(v: &[T]) -> T {
    dot(v, v).sqrt()
}

fn lu_solve<T: Real>(lu: &Lu<usize, T>, b: &[T]) -> Vec<T> {
    let rhs = Col::<T>::from_fn(b.len(), |i| b[i]);
    let x = lu.solve(&rhs);
    (0..b.len()).map(|i| x[i]).collect()
}

/// Solves `(J - gamma m m^T) delta = r` with essential rows eliminated.
///
/// Rows and columns flagged in `constrained` are replaced by the identity
/// (the increment vanishes there). Without a penalty `J` itself is
/// factorised. With a penalty, `J` is singular (constant pressures), so the
/// sparse matrix `J + alpha e_i e_i^T` is factorised for one pressure row `i`
/// and the exact penalised operator is recovered by a rank-two update; this
/// avoids the dense row and column a bordered formulation would add.
pub fn linear_step<T: Real>(
    jacobian: &CsrMatrix<T>,
    constrained: &[bool],
    penalty: Option<&Penalty<T>>,
    r: &[T],
) -> Result<(Vec<T>, LinearStats)> {
    let n = jacobian.nrows();
    let mut trips: Vec<Triplet<usize, usize, T>> = Vec::with_capacity(jacobian.nnz() + n);
    for (i, j, v) in jacobian.triplets() {
        if !constrained[i] && !constrained[j] {
            trips.push(Triplet::new(i, j, v));
        }
    }
    for (i, &c) in constrained.iter().enumerate() {
        if c {
            trips.push(Triplet::new(i, i, T::one()));
        }
    }
    let factor_error = |reason: String| Error::Factorization {
        reason,
        penalty: penalty.map(|p| p.gamma.to_f64_lossy()).unwrap_or(0.0),
        size: n,
    };
    let alpha = T::one();
    let pivot = match penalty {
        Some(p) => {
            let i = (0..n)
                .find(|&i| !p.m[i].is_zero() && !constrained[i])
                .ok_or_else(|| factor_error("penalty vector has no free entry".into()))?;
            trips.push(Triplet::new(i, i, alpha));
            Some(i)
        }
        None => None,
    };
    let mat = SparseColMat::<usize, T>::try_new_from_triplets(n, n, &trips)
        .map_err(|e| factor_error(format!("matrix creation failed: {e:?}")))?;
    let lu = mat.sp_lu().map_err(|e| factor_error(format!("LU factorisation failed: {e:?}")))?;

    let low_rank = match (penalty, pivot) {
        (Some(p), Some(i)) => {
            let m: Vec<T> = p.m.iter().zip(constrained).map(|(&v, &c)| if c { T::zero() } else { v }).collect();
            let mut e = vec![T::zero(); n];
            e[i] = T::one();
            let z_e = lu_solve(&lu, &e);
            let z_m = lu_solve(&lu, &m);
            // S = C^{-1} - U^T M^{-1} U
            let s = [[T::one() / alpha - z_e[i], -z_m[i]], [-dot(&m, &z_e), T::one() / p.gamma - dot(&m, &z_m)]];
            let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
            if !(det.abs() > T::zero()) || !det.is_finite() {
                return Err(factor_error("penalised system is singular".into()));
            }
            let s_inv = [[s[1][1] / det, -s[0][1] / det], [-s[1][0] / det, s[0][0] / det]];
            Some((LowRank { pivot: i, m, z_e, z_m, s_inv }, p.gamma))
        }
        _ => None,
    };

    let solve = |b: &[T]| -> Vec<T> {
        let mut z = lu_solve(&lu, b);
        if let Some((lr, _)) = &low_rank {
            let u_t_z = [z[lr.pivot], dot(&lr.m, &z)];
            let c0 = lr.s_inv[0][0] * u_t_z[0] + lr.s_inv[0][1] * u_t_z[1];
            let c1 = lr.s_inv[1][0] * u_t_z[0] + lr.s_inv[1][1] * u_t_z[1];
            for ((zi, &ze), &zm) in z.iter_mut().zip(&lr.z_e).zip(&lr.z_m) {
                *zi += c0 * ze + c1 * zm;
            }
        }
        z
    };
    // the penalised operator with essential rows replaced by the identity
    let apply = |x: &[T]| -> Vec<T> {
        let mut y = vec![T::zero(); n];
        for (i, yi) in y.iter_mut().enumerate() {
            if constrained[i] {
                *yi = x[i];
                continue;
            }
            let (cols, vals) = jacobian.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if !constrained[j] {
                    *yi += v * x[j];
                }
            }
        }
        if let Some((lr, gamma)) = &low_rank {
            let s = *gamma * dot(&lr.m, x);
            for (yi, &mi) in y.iter_mut().zip(&lr.m) {
                *yi -= s * mi;
            }
        }
        y
    };

    let b: Vec<T> = r.iter().zip(constrained).map(|(&v, &c)| if c { T::zero() } else { v }).collect();
    let b_norm = norm(&b);
    let scale = if b_norm > T::zero() { b_norm } else { T::one() };
    let mut x = solve(&b);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(factor_error("solution contains non-finite values (singular system)".into()));
    }
    let residual = |x: &[T]| -> Vec<T> { b.iter().zip(apply(x)).map(|(&bi, ai)| bi - ai).collect() };
    let mut res = residual(&x);
    let mut rel = norm(&res) / scale;
    let mut steps = 0;
    while rel > T::lit(TARGET_RESIDUAL) && steps < MAX_REFINEMENTS {
        let corr = solve(&res);
        for (xi, ci) in x.iter_mut().zip(corr) {
            *xi += ci;
        }
        res = residual(&x);
        rel = norm(&res) / scale;
        steps += 1;
    }
    if rel > T::lit(TARGET_RESIDUAL) {
        warn!("linear solve reached relative residual {rel:e} after {steps} refinement steps");
    }
    Ok((x, LinearStats { size: n, nnz: trips.len(), refinement_steps: steps, relative_residual: rel.to_f64_lossy() }))
}
