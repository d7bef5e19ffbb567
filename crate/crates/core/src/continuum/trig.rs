//! Real trigonometric polynomials on the circle of length 2π, and
//! spectral tools for sampled periodic functions.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// `constant + Σ (cos_k cos kx + sin_k sin kx)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly {
    pub constant: f64,
    /// `(k, cos coefficient, sin coefficient)` with `k >= 1`.
    pub terms: Vec<(u32, f64, f64)>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self { constant: c, terms: Vec::new() }
    }

    pub fn new(constant: f64, terms: Vec<(u32, f64, f64)>) -> Self {
        Self { constant, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.terms.iter().all(|&(_, c, s)| c == 0.0 && s == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.deriv_eval(0, x)
    }

    /// Value of the `order`-th derivative at `x`.
    pub fn deriv_eval(&self, order: u32, x: f64) -> f64 {
        let mut acc = if order == 0 { self.constant } else { 0.0 };
        for &(k, c, s) in &self.terms {
            let kf = k as f64;
            // d^m/dx^m cos(kx) = k^m cos(kx + mπ/2), likewise for sin.
            let phase = kf * x + order as f64 * PI / 2.0;
            acc += kf.powi(order as i32) * (c * phase.cos() + s * phase.sin());
        }
        acc
    }

    pub fn sample(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&x| self.eval(x)).collect()
    }

    pub fn max_frequency(&self) -> u32 {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }
}

/// Uniform grid `x_m = 2π m / n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|m| 2.0 * PI * m as f64 / n as f64).collect()
}

/// Spectral derivative of samples of a smooth 2π-periodic function on a
/// uniform grid. The Nyquist mode is dropped for odd orders.
pub fn spectral_derivative(f: &[f64], order: u32) -> Vec<f64> {
    let n = f.len();
    if n == 0 {
        return Vec::new();
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex<f64>> = f.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fwd.process(&mut buf);
    let i_pow = Complex::new(0.0, 1.0).powu(order);
    for (m, c) in buf.iter_mut().enumerate() {
        let k = if m <= n / 2 { m as i64 } else { m as i64 - n as i64 };
        if n.is_multiple_of(2) && m == n / 2 && order % 2 == 1 {
            *c = Complex::new(0.0, 0.0);
            continue;
        }
        *c *= i_pow * (k as f64).powi(order as i32);
    }
    inv.process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_trig_polys() {
        let p = TrigPoly::new(0.5, vec![(1, 1.0, 0.0), (2, 0.0, 0.3)]);
        let x = 0.7;
        assert!((p.eval(x) - (0.5 + x.cos() + 0.3 * (2.0 * x).sin())).abs() < 1e-15);
        assert!((p.deriv_eval(1, x) - (-x.sin() + 0.6 * (2.0 * x).cos())).abs() < 1e-14);
        assert!((p.deriv_eval(3, x) - (x.sin() - 2.4 * (2.0 * x).cos())).abs() < 1e-13);
    }

    #[test]
    fn spectral_derivative_matches_closed_form() {
        let grid = uniform_grid(64);
        let p = TrigPoly::new(0.1, vec![(1, 0.2, -0.4), (3, 0.05, 0.1)]);
        for order in 0..5 {
            let d = spectral_derivative(&p.sample(&grid), order);
            for (x, v) in grid.iter().zip(&d) {
                assert!((v - p.deriv_eval(order, *x)).abs() < 1e-9, "order {order}");
            }
        }
    }
}
