use super::operator::LinearOperator;
use crate::error::{invalid, Error, Result};

/// Default relative residual target.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest admissible relative tolerance.
pub const MAX_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Iteration cap `50 √N`.
pub fn iteration_cap(n: usize) -> usize {
    (50.0 * (n as f64).sqrt()).ceil() as usize
}

/// Eight interleaved partial sums, so the loop vectorises.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (u, v) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += u[k] * v[k];
        }
    }
    acc.iter().sum::<f64>() + tail
}

pub fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= MAX_TOL) {
        return Err(invalid(format!("relative tolerance {tol} outside (0, {MAX_TOL}]")));
    }
    Ok(())
}

/// `x += step·p`, `r −= step·Ap`, `z = D⁻¹r` in one sweep; returns `(r·r, r·z)`.
fn update(
    step: f64,
    x: &mut [f64],
    r: &mut [f64],
    z: &mut [f64],
    p: &[f64],
    ap: &[f64],
    inv_diag: &[f64],
) -> (f64, f64) {
    let mut rr = [0.0f64; 4];
    let mut rz = [0.0f64; 4];
    let n = x.len();
    let (x, r, z, p, ap, inv_diag) = (&mut x[..n], &mut r[..n], &mut z[..n], &p[..n], &ap[..n], &inv_diag[..n]);
    for k in 0..n {
        x[k] += step * p[k];
        let rk = r[k] - step * ap[k];
        r[k] = rk;
        let zk = rk * inv_diag[k];
        z[k] = zk;
        rr[k % 4] += rk * rk;
        rz[k % 4] += rk * zk;
    }
    (rr.iter().sum(), rz.iter().sum())
}

/// Jacobi-preconditioned conjugate gradients from a zero initial guess.
pub fn pcg<A: LinearOperator + ?Sized>(op: &A, rhs: &[f64], tol: f64) -> Result<(Vec<f64>, SolveStats)> {
    pcg_capped(op, rhs, tol, iteration_cap(op.dim()))
}

/// [`pcg`] with an explicit iteration cap.
pub fn pcg_capped<A: LinearOperator + ?Sized>(
    op: &A,
    rhs: &[f64],
    tol: f64,
    cap: usize,
) -> Result<(Vec<f64>, SolveStats)> {
    check_tol(tol)?;
    let n = op.dim();
    if rhs.len() != n {
        return Err(invalid(format!("right-hand side has {} entries, expected {n}", rhs.len())));
    }
    let mut x = vec![0.0; n];
    let b_norm = dot(rhs, rhs).sqrt();
    if b_norm == 0.0 {
        return Ok((x, SolveStats { iterations: 0, relative_residual: 0.0 }));
    }
    let inv_diag: Vec<f64> = op.diagonal().iter().map(|d| 1.0 / d).collect();
    let mut r = rhs.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, b)| a * b).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut history = Vec::new();
    for it in 1..=cap {
        op.apply(&p, &mut ap);
        let step = rz / dot(&p, &ap);
        let (rr, rz_next) = update(step, &mut x, &mut r, &mut z, &p, &ap, &inv_diag);
        let rel = rr.sqrt() / b_norm;
        history.push(rel);
        if rel <= tol {
            return Ok((x, SolveStats { iterations: it, relative_residual: rel }));
        }
        let beta = rz_next / rz;
        rz = rz_next;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    Err(Error::Convergence {
        iterations: cap,
        residual: *history.last().unwrap_or(&1.0),
        history,
    })
}
