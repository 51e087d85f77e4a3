//! Radial calculus: profiles, closed-form fields of radial potentials, the
//! reduced radial equations and the heat semigroup on radial data.
//!
//! Everything is expressed through `D = (1/r) d/dr`. With `s = r²` and `d`
//! the dimension, `Δf = d·Df + s·D²f` and `D^k Δf = (d+2k) D^{k+1} f + s D^{k+2} f`.

mod bessel;
pub mod closed_form;
pub mod heat;
mod jet;
pub mod odes;
pub mod profile;
pub mod quadrature;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use closed_form::{jacobian_closed_form, velocity_closed_form, vorticity_closed_form};
pub use heat::{heat_evolve_radial, heat_quadrature};
pub use odes::{
    check_rep11, check_rep12_perp, check_rep22, coupling_integral, ode_residuals, CouplingSide, OdeResidual, OdeSystem,
};
pub use profile::{BumpTemplate, PolyTerm, RadialProfile, TabulatedProfile};

/// A profile and its radial derivatives at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialDerivatives {
    pub value: f64,
    /// `∂r f`
    pub d1: f64,
    /// `(1/r) ∂r f`
    pub q1: f64,
    /// `∂r((1/r) ∂r f)`
    pub dq1: f64,
    /// `Δf`
    pub lap: f64,
    /// `∂r Δf`
    pub dlap: f64,
    /// `(1/r) ∂r Δf`
    pub qlap: f64,
    /// `∂r((1/r) ∂r Δf)`
    pub dqlap: f64,
}

/// `[Δf, DΔf, ..., D^(n-1) Δf]` from `D`-iterates of `f`.
pub(crate) fn lap_powers(d: &[f64; 6], s: f64, dim: usize, n: usize) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate().take(n.min(4)) {
        *slot = (dim + 2 * k) as f64 * d[k + 1] + s * d[k + 2];
    }
    out
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::InvalidGrid(format!("dimension {dim} not in {{2, 3}}")))
    }
}

/// `n` Chebyshev–Gauss radii on `[a, b]`, increasing.
pub fn chebyshev_radii(n: usize, a: f64, b: f64) -> Vec<f64> {
    (0..n)
        .rev()
        .map(|k| {
            let c = ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * c
        })
        .collect()
}

/// All eight radial quantities of `p` at `r` in dimension `dim`.
///
/// Closed-form families are evaluated without dividing by `r`, so the
/// origin is handled exactly; tabulated profiles stop at third order and
/// report [`Error::UnsupportedOrder`] here.
pub fn eval_derivatives(p: &RadialProfile, r: f64, dim: usize) -> Result<RadialDerivatives> {
    check_dim(dim)?;
    let d = p.d_powers(r, 4)?;
    let s = r * r;
    let l = lap_powers(&d, s, dim, 3);
    Ok(RadialDerivatives {
        value: d[0],
        d1: r * d[1],
        q1: d[1],
        dq1: r * d[2],
        lap: l[0],
        dlap: r * l[1],
        qlap: l[1],
        dqlap: r * l[2],
    })
}
