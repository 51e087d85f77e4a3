//! Periodic boxes, sampled fields and their Fourier coefficients.
//!
//! A [`Grid`] is an origin-centred cube `[-L/2, L/2)^dim` with `n` points per
//! axis. Fields are stored row-major with each component contiguous, so a
//! vector field on a 3D grid is `[u1 | u2 | u3]`, each block `n^3` long with
//! the last axis fastest.

pub mod fft;
pub mod interp;
pub mod io;
pub mod ops;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use ops::{
    advect, diff, leray_project, poisson_bracket, solve_poisson, DiffOp,
};

/// Uniform periodic grid in 2 or 3 dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
    length: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{2, 3}}")));
        }
        if !(n.is_power_of_two() || (n % 3 == 0 && (n / 3).is_power_of_two())) {
            return Err(Error::InvalidGrid(format!("n = {n} is neither 2^k nor 3·2^k")));
        }
        if !(8..=512).contains(&n) {
            return Err(Error::InvalidGrid(format!("n = {n} outside [8, 512]")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("box length {length} must be positive")));
        }
        Ok(Self { dim, n, length })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Number of sample points, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Coordinate of sample `j` along any axis.
    pub fn coord(&self, j: usize) -> f64 {
        j as f64 * self.spacing() - 0.5 * self.length
    }

    /// Per-axis indices of a flat index; unused trailing axes are zero.
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        match self.dim {
            2 => [idx / n, idx % n, 0],
            _ => [idx / (n * n), (idx / n) % n, idx % n],
        }
    }

    pub fn flat_index(&self, m: [usize; 3]) -> usize {
        let n = self.n;
        match self.dim {
            2 => m[0] * n + m[1],
            _ => (m[0] * n + m[1]) * n + m[2],
        }
    }

    /// Physical position of a sample; `x3 = 0` on 2D grids.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let m = self.multi_index(idx);
        let mut x = [0.0; 3];
        for (a, xa) in x.iter_mut().enumerate().take(self.dim) {
            *xa = self.coord(m[a]);
        }
        x
    }

    /// Signed integer wavenumber of FFT bin `j`.
    pub fn wavenumber(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j <= n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Physical wavenumber used by odd derivatives; the Nyquist bin is zeroed.
    pub fn xi_odd(&self, j: usize) -> f64 {
        if j == self.n / 2 {
            0.0
        } else {
            2.0 * PI * self.wavenumber(j) as f64 / self.length
        }
    }

    /// Physical wavenumber including the Nyquist bin (for even operators).
    pub fn xi_even(&self, j: usize) -> f64 {
        2.0 * PI * self.wavenumber(j) as f64 / self.length
    }

    /// Derivative wavevector ξ of a flat spectral index.
    pub fn xi(&self, idx: usize) -> [f64; 3] {
        let m = self.multi_index(idx);
        let mut xi = [0.0; 3];
        for a in 0..self.dim {
            xi[a] = self.xi_odd(m[a]);
        }
        xi
    }

    /// |ξ|² with the Nyquist bin retained.
    pub fn xi_sq(&self, idx: usize) -> f64 {
        let m = self.multi_index(idx);
        (0..self.dim).map(|a| self.xi_even(m[a]).powi(2)).sum()
    }

    /// Integer wavevector of a flat spectral index.
    pub fn k(&self, idx: usize) -> [i64; 3] {
        let m = self.multi_index(idx);
        let mut k = [0; 3];
        for a in 0..self.dim {
            k[a] = self.wavenumber(m[a]);
        }
        k
    }

    /// Whether a mode survives the 2/3 rule.
    pub fn dealias_keep(&self, idx: usize) -> bool {
        let cut = self.n as f64 / 3.0;
        self.k(idx)
            .iter()
            .take(self.dim)
            .all(|&k| (k.unsigned_abs() as f64) <= cut)
    }
}

/// Real samples of a scalar or vector field on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: Grid,
    components: usize,
    data: Vec<f64>,
}

impl GridField {
    pub fn new(grid: Grid, components: usize, data: Vec<f64>) -> Result<Self> {
        if components != 1 && components != grid.dim() {
            return Err(Error::Shape(format!(
                "{components} components on a {}D grid",
                grid.dim()
            )));
        }
        if data.len() != components * grid.len() {
            return Err(Error::Shape(format!(
                "expected {} samples, got {}",
                components * grid.len(),
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Shape(format!("non-finite sample at index {i}")));
        }
        Ok(Self { grid, components, data })
    }

    pub fn zeros(grid: Grid, components: usize) -> Self {
        Self {
            grid,
            components,
            data: vec![0.0; components * grid.len()],
        }
    }

    pub fn scalar_from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let data = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self { grid, components: 1, data }
    }

    /// Samples a vector field; only the first `dim` components are kept.
    pub fn vector_from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let len = grid.len();
        let d = grid.dim();
        let mut data = vec![0.0; d * len];
        for i in 0..len {
            let v = f(grid.point(i));
            for c in 0..d {
                data[c * len + i] = v[c];
            }
        }
        Self { grid, components: d, data }
    }

    /// Fallible [`GridField::scalar_from_fn`].
    pub fn try_scalar_from_fn(grid: Grid, f: impl Fn([f64; 3]) -> Result<f64>) -> Result<Self> {
        let data = (0..grid.len()).map(|i| f(grid.point(i))).collect::<Result<_>>()?;
        Ok(Self { grid, components: 1, data })
    }

    /// Fallible [`GridField::vector_from_fn`].
    pub fn try_vector_from_fn(grid: Grid, f: impl Fn([f64; 3]) -> Result<[f64; 3]>) -> Result<Self> {
        let len = grid.len();
        let d = grid.dim();
        let mut data = vec![0.0; d * len];
        for i in 0..len {
            let v = f(grid.point(i))?;
            for c in 0..d {
                data[c * len + i] = v[c];
            }
        }
        Ok(Self { grid, components: d, data })
    }

    pub(crate) fn from_parts(grid: Grid, components: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), components * grid.len());
        Self { grid, components, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_scalar(&self) -> bool {
        self.components == 1
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let len = self.grid.len();
        &self.data[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let len = self.grid.len();
        &mut self.data[c * len..(c + 1) * len]
    }

    /// Value at flat index `i`, padded to three components.
    pub fn vector_at(&self, i: usize) -> [f64; 3] {
        let mut v = [0.0; 3];
        for (c, vc) in v.iter_mut().enumerate().take(self.components) {
            *vc = self.component(c)[i];
        }
        v
    }

    pub fn linf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Max over points of the Euclidean norm of the (vector) value.
    pub fn pointwise_max_norm(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| {
                let v = self.vector_at(i);
                (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Continuous L² norm, `sqrt(∫|f|² dx)`, with the rectangle rule.
    pub fn l2(&self) -> f64 {
        (self.data.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    pub fn mean(&self, c: usize) -> f64 {
        let comp = self.component(c);
        comp.iter().sum::<f64>() / comp.len() as f64
    }

    fn check_same(&self, other: &GridField) -> Result<()> {
        if self.grid != other.grid || self.components != other.components {
            return Err(Error::Shape("fields live on different grids or shapes".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GridField) -> Result<GridField> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.grid, self.components, data))
    }

    pub fn sub(&self, other: &GridField) -> Result<GridField> {
        self.check_same(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(self.grid, self.components, data))
    }

    pub fn scale(&self, s: f64) -> GridField {
        Self::from_parts(
            self.grid,
            self.components,
            self.data.iter().map(|v| v * s).collect(),
        )
    }

    /// Stacks scalar fields into a vector field.
    pub fn stack(parts: &[GridField]) -> Result<GridField> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Shape("nothing to stack".into()))?;
        let grid = first.grid;
        let mut data = Vec::with_capacity(parts.len() * grid.len());
        for p in parts {
            if p.grid != grid || !p.is_scalar() {
                return Err(Error::Shape("stack expects scalars on one grid".into()));
            }
            data.extend_from_slice(&p.data);
        }
        GridField::new(grid, parts.len(), data)
    }

    pub fn scalar_component(&self, c: usize) -> GridField {
        Self::from_parts(self.grid, 1, self.component(c).to_vec())
    }

    pub fn to_spectral(&self) -> SpectralField {
        SpectralField::forward(self)
    }
}

/// Complex Fourier coefficients of a [`GridField`], one block per component.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    components: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, components: usize) -> Self {
        Self {
            grid,
            components,
            coeffs: vec![Complex64::new(0.0, 0.0); components * grid.len()],
        }
    }

    pub fn forward(field: &GridField) -> Self {
        let grid = field.grid;
        let mut coeffs: Vec<Complex64> =
            field.data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let len = grid.len();
        for c in 0..field.components {
            fft::forward(&mut coeffs[c * len..(c + 1) * len], grid.dim(), grid.n());
        }
        Self {
            grid,
            components: field.components,
            coeffs,
        }
    }

    /// Inverse transform; the imaginary residue of a Hermitian spectrum is dropped.
    pub fn to_grid(&self) -> GridField {
        let mut work = self.coeffs.clone();
        let len = self.grid.len();
        for c in 0..self.components {
            fft::inverse(&mut work[c * len..(c + 1) * len], self.grid.dim(), self.grid.n());
        }
        GridField::from_parts(
            self.grid,
            self.components,
            work.into_iter().map(|z| z.re).collect(),
        )
    }

    pub(crate) fn from_parts(grid: Grid, components: usize, coeffs: Vec<Complex64>) -> Self {
        Self { grid, components, coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let len = self.grid.len();
        &self.coeffs[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let len = self.grid.len();
        &mut self.coeffs[c * len..(c + 1) * len]
    }

    /// Zeroes every mode with some `|k_j| > n/3`.
    pub fn dealias(&mut self) {
        let len = self.grid.len();
        let keep: Vec<bool> = (0..len).map(|i| self.grid.dealias_keep(i)).collect();
        for c in 0..self.components {
            for (z, &k) in self.coeffs[c * len..(c + 1) * len].iter_mut().zip(&keep) {
                if !k {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    pub fn dealiased(mut self) -> Self {
        self.dealias();
        self
    }
}
