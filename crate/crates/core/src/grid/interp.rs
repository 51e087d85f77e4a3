//! Point evaluation of gridded scalars away from the sample points.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{Grid, GridField};
use crate::error::{Error, Result};

/// How off-grid values are reconstructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Tensor-product 4-point Lagrange stencil, periodic wrap.
    Cubic,
    /// Exact trigonometric interpolant; costs `n^dim` per point.
    Spectral,
}

fn lagrange4(t: f64) -> [f64; 4] {
    // nodes at -1, 0, 1, 2
    [
        -t * (t - 1.0) * (t - 2.0) / 6.0,
        (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
        -(t + 1.0) * t * (t - 2.0) / 2.0,
        (t + 1.0) * t * (t - 1.0) / 6.0,
    ]
}

/// Cubic Lagrange interpolation of a scalar at `x` (only the first `dim`
/// coordinates are used).
pub fn cubic(field: &GridField, x: [f64; 3]) -> f64 {
    let grid = field.grid();
    let n = grid.n() as i64;
    let h = grid.spacing();
    let data = field.component(0);
    let dim = grid.dim();
    let mut base = [0i64; 3];
    let mut w = [[0.0; 4]; 3];
    for a in 0..dim {
        let s = (x[a] + 0.5 * grid.length()) / h;
        let f = s.floor();
        base[a] = f as i64;
        w[a] = lagrange4(s - f);
    }
    let wrap = |i: i64| i.rem_euclid(n) as usize;
    let mut acc = 0.0;
    if dim == 2 {
        for (p, wp) in w[0].iter().enumerate() {
            let i0 = wrap(base[0] + p as i64 - 1);
            for (q, wq) in w[1].iter().enumerate() {
                let i1 = wrap(base[1] + q as i64 - 1);
                acc += wp * wq * data[grid.flat_index([i0, i1, 0])];
            }
        }
    } else {
        for (p, wp) in w[0].iter().enumerate() {
            let i0 = wrap(base[0] + p as i64 - 1);
            for (q, wq) in w[1].iter().enumerate() {
                let i1 = wrap(base[1] + q as i64 - 1);
                let wpq = wp * wq;
                for (r, wr) in w[2].iter().enumerate() {
                    let i2 = wrap(base[2] + r as i64 - 1);
                    acc += wpq * wr * data[grid.flat_index([i0, i1, i2])];
                }
            }
        }
    }
    acc
}

/// Precomputed spectrum for repeated trigonometric interpolation.
pub struct SpectralInterpolant {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralInterpolant {
    pub fn new(field: &GridField) -> Result<Self> {
        if !field.is_scalar() {
            return Err(Error::Shape("spectral interpolation expects a scalar".into()));
        }
        let grid = *field.grid();
        let mut coeffs = super::ops::to_hat(&grid, field.data());
        let norm = 1.0 / grid.len() as f64;
        coeffs.iter_mut().for_each(|z| *z *= norm);
        Ok(Self { grid, coeffs })
    }

    fn axis_weights(&self, x: f64) -> Vec<Complex64> {
        let n = self.grid.n();
        let l = self.grid.length();
        let s = x + 0.5 * l;
        (0..n)
            .map(|j| {
                if j == n / 2 {
                    // split Nyquist symmetrically so the interpolant stays real
                    Complex64::new((PI * n as f64 * s / l).cos(), 0.0)
                } else {
                    let k = self.grid.wavenumber(j) as f64;
                    Complex64::from_polar(1.0, 2.0 * PI * k * s / l)
                }
            })
            .collect()
    }

    pub fn eval(&self, x: [f64; 3]) -> f64 {
        let n = self.grid.n();
        let w0 = self.axis_weights(x[0]);
        let w1 = self.axis_weights(x[1]);
        if self.grid.dim() == 2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, a) in w0.iter().enumerate() {
                let row = &self.coeffs[i * n..(i + 1) * n];
                let inner: Complex64 = row.iter().zip(&w1).map(|(c, b)| c * b).sum();
                acc += a * inner;
            }
            acc.re
        } else {
            let w2 = self.axis_weights(x[2]);
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, a) in w0.iter().enumerate() {
                let mut mid = Complex64::new(0.0, 0.0);
                for (j, b) in w1.iter().enumerate() {
                    let row = &self.coeffs[(i * n + j) * n..(i * n + j + 1) * n];
                    let inner: Complex64 = row.iter().zip(&w2).map(|(c, d)| c * d).sum();
                    mid += b * inner;
                }
                acc += a * mid;
            }
            acc.re
        }
    }
}

/// Interpolates a scalar field at many points.
pub fn sample(field: &GridField, points: &[[f64; 3]], method: Interpolation) -> Result<Vec<f64>> {
    if !field.is_scalar() {
        return Err(Error::Shape("interpolation expects a scalar".into()));
    }
    Ok(match method {
        Interpolation::Cubic => points.iter().map(|&x| cubic(field, x)).collect(),
        Interpolation::Spectral => {
            let s = SpectralInterpolant::new(field)?;
            points.iter().map(|&x| s.eval(x)).collect()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_reproduces_cubics_locally() {
        let grid = Grid::new(2, 64, 20.0).unwrap();
        let f = GridField::scalar_from_fn(grid, |x| 1.0 + x[0] - 0.5 * x[1] * x[1] + 0.1 * x[0].powi(3));
        let p: [f64; 3] = [0.123, -0.77, 0.0];
        let exact = 1.0 + p[0] - 0.5 * p[1] * p[1] + 0.1 * p[0].powi(3);
        assert!((cubic(&f, p) - exact).abs() < 1e-12);
    }

    #[test]
    fn spectral_is_exact_for_trig() {
        let grid = Grid::new(3, 16, 2.0 * PI).unwrap();
        let f = GridField::scalar_from_fn(grid, |x| (2.0 * x[0]).sin() * x[1].cos() + (3.0 * x[2]).cos());
        let s = SpectralInterpolant::new(&f).unwrap();
        for p in [[0.3f64, -1.1, 2.0], [-3.0, 0.01, 0.5]] {
            let exact = (2.0 * p[0]).sin() * p[1].cos() + (3.0 * p[2]).cos();
            assert!((s.eval(p) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_hits_samples() {
        let grid = Grid::new(2, 16, 3.0).unwrap();
        let f = GridField::scalar_from_fn(grid, |x| (x[0] * 7.0).sin() + x[1]);
        let s = SpectralInterpolant::new(&f).unwrap();
        for i in [0, 5, 77, 200] {
            assert!((s.eval(grid.point(i)) - f.data()[i]).abs() < 1e-12);
        }
    }
}
