//! Eighth-order centered finite differences of pointwise samplers.

use crate::error::Result;

/// Default spacing for pointwise stencils.
pub const DEFAULT_STEP: f64 = 0.02;

const C1: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
const C2: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

fn shifted(x: [f64; 3], axis: usize, d: f64) -> [f64; 3] {
    let mut y = x;
    y[axis] += d;
    y
}

/// `∂f/∂x_axis` at `x`.
pub fn derivative<const M: usize>(
    f: &impl Fn([f64; 3]) -> Result<[f64; M]>,
    x: [f64; 3],
    axis: usize,
    h: f64,
) -> Result<[f64; M]> {
    let mut out = [0.0; M];
    for (k, c) in C1.iter().enumerate() {
        let d = (k + 1) as f64 * h;
        let p = f(shifted(x, axis, d))?;
        let m = f(shifted(x, axis, -d))?;
        for i in 0..M {
            out[i] += c * (p[i] - m[i]);
        }
    }
    Ok(out.map(|v| v / h))
}

/// `∂²f/∂x_axis²` at `x`.
pub fn second_derivative<const M: usize>(
    f: &impl Fn([f64; 3]) -> Result<[f64; M]>,
    x: [f64; 3],
    axis: usize,
    h: f64,
) -> Result<[f64; M]> {
    let centre = f(x)?;
    let mut out = centre.map(|v| C2[0] * v);
    for (k, c) in C2.iter().enumerate().skip(1) {
        let d = k as f64 * h;
        let p = f(shifted(x, axis, d))?;
        let m = f(shifted(x, axis, -d))?;
        for i in 0..M {
            out[i] += c * (p[i] + m[i]);
        }
    }
    Ok(out.map(|v| v / (h * h)))
}

/// `J[i][j] = ∂_j f_i` over the first `dim` coordinates.
pub fn jacobian(
    f: &impl Fn([f64; 3]) -> Result<[f64; 3]>,
    x: [f64; 3],
    dim: usize,
    h: f64,
) -> Result<[[f64; 3]; 3]> {
    let mut j = [[0.0; 3]; 3];
    for col in 0..dim {
        let d = derivative(f, x, col, h)?;
        for row in 0..3 {
            j[row][col] = d[row];
        }
    }
    Ok(j)
}

pub fn divergence(f: &impl Fn([f64; 3]) -> Result<[f64; 3]>, x: [f64; 3], dim: usize, h: f64) -> Result<f64> {
    let j = jacobian(f, x, dim, h)?;
    Ok((0..dim).map(|i| j[i][i]).sum())
}

/// Curl from a velocity gradient.
pub fn curl_of(j: &[[f64; 3]; 3]) -> [f64; 3] {
    [j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]]
}

pub fn curl(f: &impl Fn([f64; 3]) -> Result<[f64; 3]>, x: [f64; 3], dim: usize, h: f64) -> Result<[f64; 3]> {
    Ok(curl_of(&jacobian(f, x, dim, h)?))
}

pub fn laplacian<const M: usize>(
    f: &impl Fn([f64; 3]) -> Result<[f64; M]>,
    x: [f64; 3],
    dim: usize,
    h: f64,
) -> Result<[f64; M]> {
    let mut out = [0.0; M];
    for axis in 0..dim {
        let d = second_derivative(f, x, axis, h)?;
        for i in 0..M {
            out[i] += d[i];
        }
    }
    Ok(out)
}

/// Gradient of a scalar sampler.
pub fn gradient(f: &impl Fn([f64; 3]) -> Result<f64>, x: [f64; 3], dim: usize, h: f64) -> Result<[f64; 3]> {
    let g = |y: [f64; 3]| f(y).map(|v| [v]);
    let mut out = [0.0; 3];
    for (axis, o) in out.iter_mut().enumerate().take(dim) {
        *o = derivative(&g, x, axis, h)?[0];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_low_degree_polynomials() {
        let f = |x: [f64; 3]| Ok([x[0].powi(7) + x[1] * x[2], x[2].powi(8)]);
        let x = [0.3, -0.4, 0.9];
        let d = derivative(&f, x, 0, 0.1).unwrap();
        assert!((d[0] - 7.0 * 0.3f64.powi(6)).abs() < 1e-12);
        let dd = second_derivative(&f, x, 2, 0.1).unwrap();
        assert!((dd[1] - 56.0 * 0.9f64.powi(6)).abs() < 1e-10);
    }

    #[test]
    fn curl_of_rotation() {
        let f = |x: [f64; 3]| Ok([-x[1], x[0], 0.0]);
        let c = curl(&f, [0.2, 0.1, -0.3], 3, DEFAULT_STEP).unwrap();
        assert!((c[2] - 2.0).abs() < 1e-12 && c[0].abs() < 1e-12);
    }

    #[test]
    fn trig_accuracy() {
        let f = |x: [f64; 3]| Ok(x[0].sin());
        let g = gradient(&f, [0.7, 0.0, 0.0], 3, DEFAULT_STEP).unwrap();
        assert!((g[0] - 0.7f64.cos()).abs() < 1e-13);
    }
}
