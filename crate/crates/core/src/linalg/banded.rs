//! General banded systems solved by elimination with row pivoting.

use super::tridiag::Tridiagonal;
use crate::{Error, Result};

/// Square banded matrix with `kl` sub- and `ku` super-diagonals, stored row
/// by row: row `i` holds columns `i - kl ..= i + ku` in `band[i * width ..]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSystem {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    pub band: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl BandedSystem {
    pub fn zeros(n: usize, kl: usize, ku: usize, rhs: Vec<f64>) -> Self {
        assert_eq!(rhs.len(), n);
        BandedSystem {
            n,
            kl,
            ku,
            band: vec![0.0; n * (kl + ku + 1)],
            rhs,
        }
    }

    pub fn from_tridiagonal(a: &Tridiagonal, rhs: Vec<f64>) -> Self {
        let n = a.dim();
        let mut s = BandedSystem::zeros(n, 1, 1, rhs);
        for i in 0..n {
            if i > 0 {
                s.set(i, i - 1, a.lower[i]);
            }
            s.set(i, i, a.diag[i]);
            if i + 1 < n {
                s.set(i, i + 1, a.upper[i]);
            }
        }
        s
    }

    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku {
            0.0
        } else {
            self.band[i * self.width() + j + self.kl - i]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside the band"
        );
        let w = self.width();
        self.band[i * w + j + self.kl - i] = v;
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            y[i] = (lo..=hi).map(|j| self.get(i, j) * x[j]).sum();
        }
    }

    /// Solve by LU with partial (row) pivoting inside the band.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let kl = self.kl;
        // working rows hold columns i - kl ..= i + ku + kl to absorb fill-in
        let ww = 2 * kl + self.ku + 1;
        let mut w = vec![0.0; n * ww];
        let idx = |i: usize, j: usize| i * ww + j + kl - i;
        let scale = self.band.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + self.ku).min(n.saturating_sub(1));
            for j in lo..=hi {
                w[idx(i, j)] = self.get(i, j);
            }
        }
        let mut b = self.rhs.clone();
        let ucols = self.ku + kl;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = w[idx(k, k)].abs();
            for r in k + 1..=last {
                let v = w[idx(r, k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best <= 1e-14 * scale || best == 0.0 {
                return Err(Error::SingularSystem { row: k });
            }
            let cmax = (k + ucols).min(n - 1);
            if p != k {
                for j in k..=cmax {
                    w.swap(idx(k, j), idx(p, j));
                }
                b.swap(k, p);
            }
            let piv = w[idx(k, k)];
            for r in k + 1..=last {
                let f = w[idx(r, k)] / piv;
                if f == 0.0 {
                    continue;
                }
                w[idx(r, k)] = 0.0;
                for j in k + 1..=cmax {
                    w[idx(r, j)] -= f * w[idx(k, j)];
                }
                b[r] -= f * b[k];
            }
        }
        for k in (0..n).rev() {
            let cmax = (k + ucols).min(n - 1);
            let mut v = b[k];
            for j in k + 1..=cmax {
                v -= w[idx(k, j)] * b[j];
            }
            b[k] = v / w[idx(k, k)];
        }
        Ok(b)
    }
}
