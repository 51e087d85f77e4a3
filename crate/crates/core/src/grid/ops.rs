//! Spectral differential operators on periodic grids.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Grid, GridField, SpectralField};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Differential operators accepted by [`diff`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffOp {
    Gradient,
    Divergence,
    Curl,
    Laplacian,
    Biharmonic,
}

pub(crate) fn to_hat(grid: &Grid, values: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    super::fft::forward(&mut c, grid.dim(), grid.n());
    c
}

pub(crate) fn to_real(grid: &Grid, mut hat: Vec<Complex64>) -> Vec<f64> {
    super::fft::inverse(&mut hat, grid.dim(), grid.n());
    hat.into_iter().map(|z| z.re).collect()
}

/// Multiplies a spectral block by `i ξ_axis`.
pub(crate) fn d_hat(grid: &Grid, hat: &[Complex64], axis: usize) -> Vec<Complex64> {
    hat.iter()
        .enumerate()
        .map(|(i, &z)| I * grid.xi(i)[axis] * z)
        .collect()
}

pub(crate) fn lap_hat(grid: &Grid, hat: &[Complex64]) -> Vec<Complex64> {
    hat.iter()
        .enumerate()
        .map(|(i, &z)| -grid.xi_sq(i) * z)
        .collect()
}

pub(crate) fn dealias_hat(grid: &Grid, hat: &mut [Complex64]) {
    for (i, z) in hat.iter_mut().enumerate() {
        if !grid.dealias_keep(i) {
            *z = ZERO;
        }
    }
}

/// Curl in spectral space. 3D: vector to vector. 2D: a scalar maps to
/// `(∂2ψ, −∂1ψ)` and a vector maps to the scalar `∂1v2 − ∂2v1`.
pub(crate) fn curl_hat(grid: &Grid, comps: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    match (grid.dim(), comps.len()) {
        (3, 3) => {
            let d = |c: usize, a: usize| d_hat(grid, &comps[c], a);
            let sub = |x: Vec<Complex64>, y: Vec<Complex64>| -> Vec<Complex64> {
                x.into_iter().zip(y).map(|(p, q)| p - q).collect()
            };
            vec![
                sub(d(2, 1), d(1, 2)),
                sub(d(0, 2), d(2, 0)),
                sub(d(1, 0), d(0, 1)),
            ]
        }
        (2, 1) => {
            let d1 = d_hat(grid, &comps[0], 1);
            let d0 = d_hat(grid, &comps[0], 0);
            vec![d1, d0.into_iter().map(|z| -z).collect()]
        }
        (2, 2) => {
            let a = d_hat(grid, &comps[1], 0);
            let b = d_hat(grid, &comps[0], 1);
            vec![a.into_iter().zip(b).map(|(p, q)| p - q).collect()]
        }
        _ => unreachable!("curl_hat called with an unchecked shape"),
    }
}

fn split_hat(field: &GridField) -> Vec<Vec<Complex64>> {
    (0..field.components())
        .map(|c| to_hat(field.grid(), field.component(c)))
        .collect()
}

fn join_real(grid: &Grid, comps: Vec<Vec<Complex64>>) -> GridField {
    let k = comps.len();
    let mut data = Vec::with_capacity(k * grid.len());
    for c in comps {
        data.extend(to_real(grid, c));
    }
    GridField::from_parts(*grid, k, data)
}

/// Spectral derivative of a band-limited field.
pub fn diff(field: &GridField, op: DiffOp) -> Result<GridField> {
    let grid = *field.grid();
    let dim = grid.dim();
    let comps = field.components();
    match op {
        DiffOp::Gradient => {
            if comps != 1 {
                return Err(Error::Shape("gradient expects a scalar field".into()));
            }
            let hat = to_hat(&grid, field.data());
            Ok(join_real(&grid, (0..dim).map(|a| d_hat(&grid, &hat, a)).collect()))
        }
        DiffOp::Divergence => {
            if comps != dim {
                return Err(Error::Shape("divergence expects a vector field".into()));
            }
            let mut acc = vec![ZERO; grid.len()];
            for (a, hat) in split_hat(field).into_iter().enumerate() {
                for (s, v) in acc.iter_mut().zip(d_hat(&grid, &hat, a)) {
                    *s += v;
                }
            }
            Ok(join_real(&grid, vec![acc]))
        }
        DiffOp::Curl => {
            if dim == 3 && comps != 3 {
                return Err(Error::Shape("3D curl expects a vector field".into()));
            }
            Ok(join_real(&grid, curl_hat(&grid, &split_hat(field))))
        }
        DiffOp::Laplacian => Ok(join_real(
            &grid,
            split_hat(field).iter().map(|h| lap_hat(&grid, h)).collect(),
        )),
        DiffOp::Biharmonic => Ok(join_real(
            &grid,
            split_hat(field)
                .iter()
                .map(|h| lap_hat(&grid, &lap_hat(&grid, h)))
                .collect(),
        )),
    }
}

/// Velocity gradient `J[i][j] = ∂_j u_i` of a dealiased copy of `u`, plus
/// that dealiased velocity.
pub(crate) fn dealiased_gradient(
    grid: &Grid,
    u_hat: &[Vec<Complex64>],
) -> (Vec<Vec<f64>>, Vec<Vec<Vec<f64>>>) {
    let dim = grid.dim();
    let mut vel = Vec::with_capacity(dim);
    let mut jac = Vec::with_capacity(dim);
    for h in u_hat {
        let mut h = h.clone();
        dealias_hat(grid, &mut h);
        jac.push((0..dim).map(|a| to_real(grid, d_hat(grid, &h, a))).collect());
        vel.push(to_real(grid, h));
    }
    (vel, jac)
}

/// Self-advection `(u·∇)u` with 2/3-rule truncation before and after the products.
pub fn advect(u: &GridField) -> Result<GridField> {
    let grid = *u.grid();
    let dim = grid.dim();
    if u.components() != dim {
        return Err(Error::Shape("advect expects a vector field".into()));
    }
    let (vel, jac) = dealiased_gradient(&grid, &split_hat(u));
    let mut out = Vec::with_capacity(dim);
    for row in jac.iter().take(dim) {
        let mut prod = vec![0.0; grid.len()];
        for (j, col) in row.iter().enumerate() {
            for ((p, &uj), &d) in prod.iter_mut().zip(&vel[j]).zip(col) {
                *p += uj * d;
            }
        }
        let mut h = to_hat(&grid, &prod);
        dealias_hat(&grid, &mut h);
        out.push(h);
    }
    Ok(join_real(&grid, out))
}

/// Leray projection of spectral components in place; the zero mode is untouched.
pub(crate) fn leray_hat(grid: &Grid, comps: &mut [Vec<Complex64>]) {
    let dim = grid.dim();
    for i in 0..grid.len() {
        let xi = grid.xi(i);
        let k2: f64 = xi[..dim].iter().map(|x| x * x).sum();
        if k2 == 0.0 {
            continue;
        }
        let mut dot = ZERO;
        for a in 0..dim {
            dot += xi[a] * comps[a][i];
        }
        let f = dot / k2;
        for a in 0..dim {
            comps[a][i] -= xi[a] * f;
        }
    }
}

/// Divergence-free part of `v`, mode-wise `v̂ − ξ(ξ·v̂)/|ξ|²`.
pub fn leray_project(v: &GridField) -> Result<GridField> {
    let grid = *v.grid();
    if v.components() != grid.dim() {
        return Err(Error::Shape("leray projection expects a vector field".into()));
    }
    let mut comps = split_hat(v);
    leray_hat(&grid, &mut comps);
    Ok(join_real(&grid, comps))
}

pub(crate) fn bracket_hat(grid: &Grid, f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    let mut f = f.to_vec();
    let mut g = g.to_vec();
    dealias_hat(grid, &mut f);
    dealias_hat(grid, &mut g);
    let f1 = to_real(grid, d_hat(grid, &f, 0));
    let f2 = to_real(grid, d_hat(grid, &f, 1));
    let g1 = to_real(grid, d_hat(grid, &g, 0));
    let g2 = to_real(grid, d_hat(grid, &g, 1));
    let prod: Vec<f64> = (0..grid.len())
        .map(|i| f1[i] * g2[i] - f2[i] * g1[i])
        .collect();
    let mut h = to_hat(grid, &prod);
    dealias_hat(grid, &mut h);
    h
}

/// Dealiased 2D bracket `{f, g} = ∂1f ∂2g − ∂2f ∂1g`.
pub fn poisson_bracket(f: &GridField, g: &GridField) -> Result<GridField> {
    let grid = *f.grid();
    if grid.dim() != 2 {
        return Err(Error::Shape("the Poisson bracket is defined on 2D grids only".into()));
    }
    if !f.is_scalar() || !g.is_scalar() || g.grid() != &grid {
        return Err(Error::Shape("Poisson bracket expects two scalars on one grid".into()));
    }
    let h = bracket_hat(&grid, &to_hat(&grid, f.data()), &to_hat(&grid, g.data()));
    Ok(join_real(&grid, vec![h]))
}

/// Inverse Laplacian of spectral data; the zero mode is set to zero.
pub(crate) fn inv_lap_hat(grid: &Grid, hat: &[Complex64]) -> Vec<Complex64> {
    hat.iter()
        .enumerate()
        .map(|(i, &z)| {
            let k2 = grid.xi_sq(i);
            if k2 == 0.0 {
                ZERO
            } else {
                -z / k2
            }
        })
        .collect()
}

/// Zero-mean solution of `Δp = rhs`. The right-hand side must have zero mean.
pub fn solve_poisson(rhs: &GridField) -> Result<GridField> {
    if !rhs.is_scalar() {
        return Err(Error::Shape("Poisson solve expects a scalar".into()));
    }
    let mean = rhs.mean(0);
    let limit = 1e-10 * rhs.linf();
    if mean.abs() > limit && mean != 0.0 {
        return Err(Error::NonZeroMean { mean, limit });
    }
    let grid = *rhs.grid();
    let h = inv_lap_hat(&grid, &to_hat(&grid, rhs.data()));
    Ok(join_real(&grid, vec![h]))
}

impl SpectralField {
    /// Applies a mode-wise multiplier to every component.
    pub fn map_modes(&self, f: impl Fn(usize, Complex64) -> Complex64) -> SpectralField {
        let len = self.grid().len();
        let coeffs = self
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, &z)| f(i % len, z))
            .collect();
        SpectralField::from_parts(*self.grid(), self.components(), coeffs)
    }
}
