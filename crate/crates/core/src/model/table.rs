//! Monotone cubic interpolation tables.
//!
//! Slopes are either supplied (exact Hermite data) or estimated with the
//! Fritsch–Carlson rule. In both cases the Fritsch–Carlson limiter is
//! applied on intervals where the slopes agree in sign with the secant,
//! so monotone data gives a monotone interpolant.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Behaviour beyond the last abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Tail {
    /// Evaluation past the last node is an error.
    #[default]
    Reject,
    /// Hold the last value.
    Constant,
    /// Continue as `y_last * (s / x_last)^exponent`.
    Power { exponent: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableData {
    x: Vec<f64>,
    y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slopes: Option<Vec<f64>>,
    #[serde(default)]
    tail: Tail,
}

/// A validated one-dimensional interpolation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableData", into = "TableData")]
pub struct Table {
    x: Vec<f64>,
    y: Vec<f64>,
    supplied: Option<Vec<f64>>,
    m: Vec<f64>,
    tail: Tail,
}

impl TryFrom<TableData> for Table {
    type Error = Error;
    fn try_from(d: TableData) -> Result<Self> {
        Table::build(d.x, d.y, d.slopes, d.tail)
    }
}

impl From<Table> for TableData {
    fn from(t: Table) -> Self {
        TableData {
            x: t.x,
            y: t.y,
            slopes: t.supplied,
            tail: t.tail,
        }
    }
}

impl Table {
    /// Table with Fritsch–Carlson slope estimates.
    pub fn new(x: Vec<f64>, y: Vec<f64>, tail: Tail) -> Result<Self> {
        Self::build(x, y, None, tail)
    }

    /// Table with supplied (Hermite) slopes.
    pub fn with_slopes(x: Vec<f64>, y: Vec<f64>, slopes: Vec<f64>, tail: Tail) -> Result<Self> {
        Self::build(x, y, Some(slopes), tail)
    }

    fn build(x: Vec<f64>, y: Vec<f64>, slopes: Option<Vec<f64>>, tail: Tail) -> Result<Self> {
        if x.len() < 2 || x.len() != y.len() {
            return Err(Error::InvalidTable(format!(
                "need at least two nodes and matching lengths (x: {}, y: {})",
                x.len(),
                y.len()
            )));
        }
        if let Some(s) = &slopes {
            if s.len() != x.len() {
                return Err(Error::InvalidTable(
                    "slope count differs from node count".into(),
                ));
            }
            if s.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidTable("non-finite slope".into()));
            }
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTable("non-finite node".into()));
        }
        if let Some(k) = x.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTable(format!(
                "abscissae not strictly increasing at index {}",
                k + 1
            )));
        }
        if let Tail::Power { exponent } = tail {
            if !exponent.is_finite() || x[x.len() - 1] <= 0.0 {
                return Err(Error::InvalidTable(
                    "power tail needs a positive last node".into(),
                ));
            }
        }
        let m = limited_slopes(&x, &y, slopes.as_deref());
        Ok(Table {
            x,
            y,
            supplied: slopes,
            m,
            tail,
        })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// First abscissa.
    pub fn start(&self) -> f64 {
        self.x[0]
    }

    /// Last abscissa.
    pub fn end(&self) -> f64 {
        self.x[self.x.len() - 1]
    }

    /// Largest argument that can be evaluated.
    pub fn support_end(&self) -> f64 {
        match self.tail {
            Tail::Reject => self.end(),
            _ => f64::INFINITY,
        }
    }

    /// Smallest and largest tabulated value.
    pub fn value_range(&self) -> (f64, f64) {
        let lo = self.y.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        self.eval_with_slope(s).map(|(v, _)| v)
    }

    /// Value and derivative of the interpolant at `s`.
    pub fn eval_with_slope(&self, s: f64) -> Result<(f64, f64)> {
        let n = self.x.len();
        if !(s >= self.x[0]) {
            return Err(Error::Domain {
                node: None,
                s,
                what: "table argument below first node",
            });
        }
        if s > self.x[n - 1] {
            let (xl, yl) = (self.x[n - 1], self.y[n - 1]);
            return match self.tail {
                Tail::Reject => Err(Error::Domain {
                    node: None,
                    s,
                    what: "table argument beyond last node",
                }),
                Tail::Constant => Ok((yl, 0.0)),
                Tail::Power { exponent } => {
                    let v = yl * (s / xl).powf(exponent);
                    Ok((v, exponent * v / s))
                }
            };
        }
        let k = match self.x.partition_point(|&xi| xi <= s) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let t = (s - self.x[k]) / h;
        let (y0, y1, m0, m1) = (self.y[k], self.y[k + 1], self.m[k], self.m[k + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        let v = h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1;
        let d00 = (6.0 * t2 - 6.0 * t) / h;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / h;
        let d11 = 3.0 * t2 - 2.0 * t;
        let d = d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1;
        Ok((v, d))
    }
}

fn limited_slopes(x: &[f64], y: &[f64], supplied: Option<&[f64]>) -> Vec<f64> {
    let n = x.len();
    let d: Vec<f64> = (0..n - 1)
        .map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k]))
        .collect();
    let mut m = match supplied {
        Some(s) => s.to_vec(),
        None => {
            let mut m = vec![0.0; n];
            if n == 2 {
                m[0] = d[0];
                m[1] = d[0];
            } else {
                m[0] = end_slope(x[1] - x[0], x[2] - x[1], d[0], d[1]);
                m[n - 1] = end_slope(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], d[n - 2], d[n - 3]);
                for k in 1..n - 1 {
                    m[k] = if d[k - 1] * d[k] <= 0.0 {
                        0.0
                    } else {
                        0.5 * (d[k - 1] + d[k])
                    };
                }
            }
            m
        }
    };
    for k in 0..n - 1 {
        if d[k] == 0.0 {
            if supplied.is_none() {
                m[k] = 0.0;
                m[k + 1] = 0.0;
            }
            continue;
        }
        let a = m[k] / d[k];
        let b = m[k + 1] / d[k];
        if a < 0.0 || b < 0.0 {
            if supplied.is_none() {
                if a < 0.0 {
                    m[k] = 0.0;
                }
                if b < 0.0 {
                    m[k + 1] = 0.0;
                }
            }
            continue;
        }
        let r = a * a + b * b;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            m[k] = tau * a * d[k];
            m[k + 1] = tau * b * d[k];
        }
    }
    m
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}
