//! BiCGStab with diagonal (Jacobi) preconditioning.

use crate::{Error, Result};

/// Anything that can be applied to a vector.
pub trait Operator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// Diagonal used for preconditioning; zeros are replaced by ones.
    fn diagonal(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrylovSolution {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual `‖b - Ax‖₂ / ‖b‖₂`.
    pub residual: f64,
    pub restarts: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solve `A x = b` to relative residual `tol`, with at most `max_iter` iterations.
///
/// A breakdown restarts the iteration once from the current iterate; a
/// second breakdown is reported as [`Error::Breakdown`].
pub fn krylov_solve<A: Operator + ?Sized>(
    a: &A,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<KrylovSolution> {
    let n = a.dim();
    assert_eq!(b.len(), n);
    let bn = norm(b);
    if bn == 0.0 {
        return Ok(KrylovSolution {
            x: vec![0.0; n],
            iterations: 0,
            residual: 0.0,
            restarts: 0,
        });
    }
    let inv_d: Vec<f64> = a
        .diagonal()
        .into_iter()
        .map(|d| {
            if d != 0.0 && d.is_finite() {
                1.0 / d
            } else {
                1.0
            }
        })
        .collect();
    let precond = |v: &[f64], out: &mut [f64]| {
        for i in 0..n {
            out[i] = inv_d[i] * v[i];
        }
    };
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut total = 0;
    let mut restarts = 0;
    let (mut p, mut v, mut y, mut s, mut z, mut t) = (
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
    );
    loop {
        let rhat = r.clone();
        let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
        p.iter_mut().for_each(|e| *e = 0.0);
        v.iter_mut().for_each(|e| *e = 0.0);
        let rhat_n = norm(&rhat);
        let breakdown: &'static str = loop {
            if total >= max_iter {
                return Err(Error::NoConvergence {
                    iterations: total,
                    residual: norm(&r) / bn,
                });
            }
            total += 1;
            let rho_new = dot(&rhat, &r);
            if rho_new.abs() <= 1e-30 * rhat_n * norm(&r) || rho_new == 0.0 {
                break "rho vanished";
            }
            let beta = (rho_new / rho) * (alpha / omega);
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
            precond(&p, &mut y);
            a.apply(&y, &mut v);
            let den = dot(&rhat, &v);
            if den.abs() <= 1e-30 * rhat_n * norm(&v) || den == 0.0 {
                break "projection of A p vanished";
            }
            alpha = rho_new / den;
            for i in 0..n {
                s[i] = r[i] - alpha * v[i];
                x[i] += alpha * y[i];
            }
            let sn = norm(&s);
            if sn <= tol * bn {
                return Ok(KrylovSolution {
                    x,
                    iterations: total,
                    residual: sn / bn,
                    restarts,
                });
            }
            precond(&s, &mut z);
            a.apply(&z, &mut t);
            let tt = dot(&t, &t);
            if tt == 0.0 {
                break "A s vanished";
            }
            omega = dot(&t, &s) / tt;
            for i in 0..n {
                x[i] += omega * z[i];
                r[i] = s[i] - omega * t[i];
            }
            let rn = norm(&r);
            if rn <= tol * bn {
                return Ok(KrylovSolution {
                    x,
                    iterations: total,
                    residual: rn / bn,
                    restarts,
                });
            }
            if omega == 0.0 {
                break "omega vanished";
            }
            if !rn.is_finite() {
                break "non-finite residual";
            }
            rho = rho_new;
        };
        if restarts == 1 {
            return Err(Error::Breakdown {
                iterations: total,
                reason: breakdown,
            });
        }
        restarts += 1;
        let mut ax = vec![0.0; n];
        a.apply(&x, &mut ax);
        for i in 0..n {
            r[i] = b[i] - ax[i];
        }
    }
}

impl Operator for super::Tridiagonal {
    fn dim(&self) -> usize {
        self.dim()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        super::Tridiagonal::apply(self, x, y)
    }
    fn diagonal(&self) -> Vec<f64> {
        self.diag.clone()
    }
}

impl Operator for super::CsrMatrix {
    fn dim(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        super::CsrMatrix::apply(self, x, y)
    }
    fn diagonal(&self) -> Vec<f64> {
        super::CsrMatrix::diagonal(self)
    }
}
