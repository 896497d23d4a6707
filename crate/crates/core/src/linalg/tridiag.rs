//! Tridiagonal systems: Thomas algorithm with a pivoting fallback.

use super::banded::BandedSystem;
use crate::{Error, Result};

/// Tridiagonal matrix. `lower[0]` and `upper[n-1]` are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Self {
        assert!(lower.len() == diag.len() && upper.len() == diag.len());
        Tridiagonal { lower, diag, upper }
    }

    pub fn identity(n: usize) -> Self {
        Tridiagonal::new(vec![0.0; n], vec![1.0; n], vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.lower[i] * x[i - 1];
            }
            if i + 1 < n {
                v += self.upper[i] * x[i + 1];
            }
            y[i] = v;
        }
    }

    /// Largest entry magnitude.
    pub fn scale(&self) -> f64 {
        self.lower
            .iter()
            .chain(&self.diag)
            .chain(&self.upper)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Solve `A x = rhs`.
    ///
    /// Runs the Thomas algorithm; if a pivot drops below `1e-14 * scale` the
    /// system is re-solved by banded elimination with row pivoting.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        assert_eq!(rhs.len(), n);
        if n == 0 {
            return Ok(Vec::new());
        }
        let tiny = 1e-14 * self.scale();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut piv = self.diag[0];
        if piv.abs() <= tiny {
            return self.solve_pivoting(rhs);
        }
        c[0] = self.upper[0] / piv;
        d[0] = rhs[0] / piv;
        for i in 1..n {
            piv = self.diag[i] - self.lower[i] * c[i - 1];
            if piv.abs() <= tiny || !piv.is_finite() {
                return self.solve_pivoting(rhs);
            }
            c[i] = if i + 1 < n { self.upper[i] / piv } else { 0.0 };
            d[i] = (rhs[i] - self.lower[i] * d[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }

    fn solve_pivoting(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        BandedSystem::from_tridiagonal(self, rhs.to_vec()).solve()
    }
}

/// Solve a tridiagonal system, reporting a singular matrix as an error.
pub fn tridiag_solve(a: &Tridiagonal, rhs: &[f64]) -> Result<Vec<f64>> {
    let x = a.solve(rhs)?;
    if x.iter().all(|v| v.is_finite()) {
        Ok(x)
    } else {
        Err(Error::SingularSystem { row: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, -2.0, 3.5];
        assert_eq!(tridiag_solve(&Tridiagonal::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn poisson_on_unit_interval_is_exact_on_quadratics() {
        let m = 64;
        let h = 1.0 / m as f64;
        let n = m - 1;
        let a = Tridiagonal::new(
            vec![-1.0 / (h * h); n],
            vec![2.0 / (h * h); n],
            vec![-1.0 / (h * h); n],
        );
        let x = tridiag_solve(&a, &vec![1.0; n]).unwrap();
        for (k, v) in x.iter().enumerate() {
            let xi = (k + 1) as f64 * h;
            assert!((v - xi * (1.0 - xi) / 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn random_dominant_backward_error() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 500;
        let lower: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let upper: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let diag: Vec<f64> = (0..n)
            .map(|i| 2.5 + lower[i].abs() + rng.gen_range(0.0..1.0))
            .collect();
        let a = Tridiagonal::new(lower, diag, upper);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = tridiag_solve(&a, &b).unwrap();
        let mut r = vec![0.0; n];
        a.apply(&x, &mut r);
        let err = r
            .iter()
            .zip(&b)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        let bn = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(err <= 1e-12 * bn);
    }

    #[test]
    fn zero_pivot_falls_back_to_pivoting() {
        // first pivot is zero but the matrix is nonsingular
        let a = Tridiagonal::new(
            vec![0.0, 1.0, 1.0],
            vec![0.0, 1.0, 2.0],
            vec![1.0, 1.0, 0.0],
        );
        let b = vec![1.0, 2.0, 3.0];
        let x = tridiag_solve(&a, &b).unwrap();
        let mut r = vec![0.0; 3];
        a.apply(&x, &mut r);
        for (p, q) in r.iter().zip(&b) {
            assert!((p - q).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = Tridiagonal::new(vec![0.0, 1.0], vec![1.0, 1.0], vec![1.0, 0.0]);
        assert!(matches!(
            tridiag_solve(&a, &[1.0, 2.0]),
            Err(Error::SingularSystem { .. })
        ));
    }
}
