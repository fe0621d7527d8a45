//! Wall data for the transverse velocity, `w(0,t) = w-(t)` and `w(1,t) = w+(t)`.
//!
//! Only representations that are continuously differentiable in time can be
//! built: constants, sinusoids, and natural cubic splines (extended linearly
//! past the table so the C1 property holds on the whole line).

use crate::error::{Error, Result};
use crate::solver::tridiag;

/// A scalar function of time.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    Constant(f64),
    /// `mean + amplitude * sin(omega * t + phase)`
    Sinusoid {
        mean: f64,
        amplitude: f64,
        omega: f64,
        phase: f64,
    },
    Spline(CubicSpline),
}

impl Signal {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Signal::Constant(c) => *c,
            Signal::Sinusoid {
                mean,
                amplitude,
                omega,
                phase,
            } => mean + amplitude * (omega * t + phase).sin(),
            Signal::Spline(s) => s.eval(t),
        }
    }
}

/// Natural cubic spline through a time table.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    t: Vec<f64>,
    v: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if t.len() != v.len() || t.len() < 2 {
            return Err(Error::Invalid(
                "spline needs at least two (t, value) pairs of equal length".into(),
            ));
        }
        if !t.windows(2).all(|p| p[1] > p[0]) {
            return Err(Error::Invalid("spline knots must be strictly increasing".into()));
        }
        if !v.iter().chain(t.iter()).all(|x| x.is_finite()) {
            return Err(Error::Invalid("spline table contains non-finite values".into()));
        }
        let n = t.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            let k = n - 2;
            let mut lower = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for j in 0..k {
                let i = j + 1;
                let h0 = t[i] - t[i - 1];
                let h1 = t[i + 1] - t[i];
                lower[j] = h0;
                diag[j] = 2.0 * (h0 + h1);
                upper[j] = h1;
                rhs[j] = 6.0 * ((v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0);
            }
            let inner = tridiag::solve(&lower, &diag, &upper, &rhs)?;
            m[1..n - 1].copy_from_slice(&inner);
        }
        Ok(Self { t, v, m })
    }

    fn slope_at_end(&self, left: bool) -> f64 {
        let n = self.t.len();
        if left {
            let h = self.t[1] - self.t[0];
            (self.v[1] - self.v[0]) / h - h * (2.0 * self.m[0] + self.m[1]) / 6.0
        } else {
            let h = self.t[n - 1] - self.t[n - 2];
            (self.v[n - 1] - self.v[n - 2]) / h + h * (self.m[n - 2] + 2.0 * self.m[n - 1]) / 6.0
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.v[0] + self.slope_at_end(true) * (t - self.t[0]);
        }
        if t >= self.t[n - 1] {
            return self.v[n - 1] + self.slope_at_end(false) * (t - self.t[n - 1]);
        }
        let i = match self.t.partition_point(|&k| k <= t) {
            0 => 0,
            p => p - 1,
        };
        let h = self.t[i + 1] - self.t[i];
        let a = (self.t[i + 1] - t) / h;
        let b = (t - self.t[i]) / h;
        a * self.v[i]
            + b * self.v[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

/// Time-dependent transverse-velocity values at both walls.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub w_minus: [Signal; 2],
    pub w_plus: [Signal; 2],
}

impl BoundaryData {
    pub fn constant(w_minus: [f64; 2], w_plus: [f64; 2]) -> Self {
        Self {
            w_minus: w_minus.map(Signal::Constant),
            w_plus: w_plus.map(Signal::Constant),
        }
    }

    /// Homogeneous wall data `w- = w+ = 0`.
    pub fn zero() -> Self {
        Self::constant([0.0; 2], [0.0; 2])
    }

    pub fn minus(&self, t: f64) -> [f64; 2] {
        [self.w_minus[0].eval(t), self.w_minus[1].eval(t)]
    }

    pub fn plus(&self, t: f64) -> [f64; 2] {
        [self.w_plus[0].eval(t), self.w_plus[1].eval(t)]
    }
}
