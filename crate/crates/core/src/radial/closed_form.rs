//! Pointwise velocity, vorticity and velocity gradient of representations
//! with radial potentials.
//!
//! For radial `f`, `∇f = x·Df`, so
//! `(A×∇)f = (A×x) Df` and `((A×∇)×∇)f = (A·x) x D²f + A(Df − Δf)`.

use super::{check_dim, lap_powers, RadialProfile};
use crate::error::{Error, Result};
use crate::frames::{cross, dot, FrameVector, RepKind, Slot};

pub(crate) type Powers = [f64; 6];

fn position(x: [f64; 3], dim: usize) -> ([f64; 3], f64) {
    let x = if dim == 2 { [x[0], x[1], 0.0] } else { x };
    (x, dot(x, x))
}

fn slot_velocity(slot: Slot, a: [f64; 3], d: &Powers, x: [f64; 3], s: f64, dim: usize) -> [f64; 3] {
    match slot {
        Slot::Cross => cross(a, x).map(|v| v * d[1]),
        Slot::CrossCurl => {
            let lap = dim as f64 * d[1] + s * d[2];
            let ax = dot(a, x);
            [0, 1, 2].map(|i| ax * x[i] * d[2] + a[i] * (d[1] - lap))
        }
    }
}

fn slot_vorticity(slot: Slot, a: [f64; 3], d: &Powers, x: [f64; 3], s: f64, dim: usize) -> [f64; 3] {
    match slot {
        Slot::Cross if dim == 2 => {
            let lap = 2.0 * d[1] + s * d[2];
            a.map(|v| v * lap)
        }
        Slot::Cross => slot_velocity(Slot::CrossCurl, a, d, x, s, dim).map(|v| -v),
        Slot::CrossCurl => {
            let l = lap_powers(d, s, dim, 2);
            cross(a, x).map(|v| v * l[1])
        }
    }
}

fn slot_jacobian(slot: Slot, a: [f64; 3], d: &Powers, x: [f64; 3], s: f64, dim: usize) -> [[f64; 3]; 3] {
    let mut j = [[0.0; 3]; 3];
    match slot {
        Slot::Cross => {
            let ax = cross(a, x);
            for col in 0..dim {
                let mut e = [0.0; 3];
                e[col] = 1.0;
                let c = cross(a, e);
                for row in 0..3 {
                    j[row][col] = c[row] * d[1] + ax[row] * x[col] * d[2];
                }
            }
        }
        Slot::CrossCurl => {
            let l = lap_powers(d, s, dim, 2);
            let ax = dot(a, x);
            for row in 0..3 {
                for col in 0..dim {
                    let delta = if row == col { 1.0 } else { 0.0 };
                    j[row][col] = a[col] * x[row] * d[2]
                        + ax * delta * d[2]
                        + ax * x[row] * x[col] * d[3]
                        + a[row] * x[col] * (d[2] - l[1]);
                }
            }
        }
    }
    j
}

fn order_for(slot: Slot, base: usize) -> usize {
    match slot {
        Slot::Cross => base,
        Slot::CrossCurl => base + 1,
    }
}

fn check_planar(kind: RepKind, a: &FrameVector, b: &FrameVector, dim: usize) -> Result<()> {
    check_dim(dim)?;
    if dim == 2
        && (kind != RepKind::Rep11
            || a.normalized() != FrameVector::e3()
            || b.normalized() != FrameVector::e3())
    {
        return Err(Error::InvalidFrame(
            "2D representations are (1,1) with A = B = e3".into(),
        ));
    }
    Ok(())
}

/// Velocity from `D`-iterates of both potentials.
pub(crate) fn velocity_from_powers(
    kind: RepKind,
    a: [f64; 3],
    b: [f64; 3],
    dphi: &Powers,
    dpsi: &Powers,
    x: [f64; 3],
    dim: usize,
) -> [f64; 3] {
    let (x, s) = position(x, dim);
    let (sa, sb) = kind.slots();
    let u = slot_velocity(sa, a, dphi, x, s, dim);
    let v = slot_velocity(sb, b, dpsi, x, s, dim);
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

pub(crate) fn jacobian_from_powers(
    kind: RepKind,
    a: [f64; 3],
    b: [f64; 3],
    dphi: &Powers,
    dpsi: &Powers,
    x: [f64; 3],
    dim: usize,
) -> [[f64; 3]; 3] {
    let (x, s) = position(x, dim);
    let (sa, sb) = kind.slots();
    let p = slot_jacobian(sa, a, dphi, x, s, dim);
    let q = slot_jacobian(sb, b, dpsi, x, s, dim);
    let mut j = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            j[r][c] = p[r][c] + q[r][c];
        }
    }
    j
}

/// `D`-iterates of `Δf` from those of `f` (three orders fewer are valid).
pub(crate) fn laplacian_of_powers(d: &Powers, r: f64, dim: usize) -> Powers {
    let l = lap_powers(d, r * r, dim, 4);
    [l[0], l[1], l[2], l[3], 0.0, 0.0]
}

/// Exact velocity of the representation `kind` with radial potentials at `x`.
pub fn velocity_closed_form(
    kind: RepKind,
    a: &FrameVector,
    b: &FrameVector,
    phi: &RadialProfile,
    psi: &RadialProfile,
    x: [f64; 3],
    dim: usize,
) -> Result<[f64; 3]> {
    check_planar(kind, a, b, dim)?;
    let (xp, s) = position(x, dim);
    let r = s.sqrt();
    let (sa, sb) = kind.slots();
    let dphi = phi.d_powers(r, order_for(sa, 1))?;
    let dpsi = psi.d_powers(r, order_for(sb, 1))?;
    Ok(velocity_from_powers(kind, a.as_array(), b.as_array(), &dphi, &dpsi, xp, dim))
}

/// Exact vorticity; in 2D the result is `(0, 0, Δφ)`.
pub fn vorticity_closed_form(
    kind: RepKind,
    a: &FrameVector,
    b: &FrameVector,
    phi: &RadialProfile,
    psi: &RadialProfile,
    x: [f64; 3],
    dim: usize,
) -> Result<[f64; 3]> {
    check_planar(kind, a, b, dim)?;
    let (xp, s) = position(x, dim);
    let r = s.sqrt();
    let (sa, sb) = kind.slots();
    let dphi = phi.d_powers(r, order_for(sa, 2))?;
    let dpsi = psi.d_powers(r, order_for(sb, 2))?;
    let w = slot_vorticity(sa, a.as_array(), &dphi, xp, s, dim);
    let v = slot_vorticity(sb, b.as_array(), &dpsi, xp, s, dim);
    Ok([w[0] + v[0], w[1] + v[1], w[2] + v[2]])
}

/// Velocity gradient `J[i][j] = ∂_j u_i`.
pub fn jacobian_closed_form(
    kind: RepKind,
    a: &FrameVector,
    b: &FrameVector,
    phi: &RadialProfile,
    psi: &RadialProfile,
    x: [f64; 3],
    dim: usize,
) -> Result<[[f64; 3]; 3]> {
    check_planar(kind, a, b, dim)?;
    let (xp, s) = position(x, dim);
    let r = s.sqrt();
    let (sa, sb) = kind.slots();
    let dphi = phi.d_powers(r, order_for(sa, 2))?;
    let dpsi = psi.d_powers(r, order_for(sb, 2))?;
    Ok(jacobian_from_powers(kind, a.as_array(), b.as_array(), &dphi, &dpsi, xp, dim))
}
