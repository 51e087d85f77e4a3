//! Radial ordinary differential equations that a pair of radial potentials
//! must satisfy for the represented field to be a steady Euler flow, and the
//! integrated first-order form of the aligned (1,2) system.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, ABS_TOL, REL_TOL};
use super::{lap_powers, RadialProfile};
use crate::error::{Error, Result};

/// Which reduced system to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OdeSystem {
    /// Aligned (1,2): the coupled pair for `(φ, ψ)`.
    Pair12,
    /// (1,1) with independent frames.
    Constraints11,
    /// (2,2) with independent frames.
    Constraints22,
    /// (1,2) with `A ⊥ B`.
    Constraints12Perp,
}

impl OdeSystem {
    pub const ALL: [OdeSystem; 4] = [
        OdeSystem::Pair12,
        OdeSystem::Constraints11,
        OdeSystem::Constraints22,
        OdeSystem::Constraints12Perp,
    ];

    /// D-iterate orders needed for `(φ, ψ)`.
    pub fn orders(self) -> (usize, usize) {
        match self {
            OdeSystem::Pair12 => (2, 4),
            OdeSystem::Constraints11 => (3, 3),
            OdeSystem::Constraints22 => (4, 4),
            OdeSystem::Constraints12Perp => (2, 5),
        }
    }
}

/// One residual of a reduced system together with the sum of the absolute
/// values of its terms, which serves as its natural scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    pub name: String,
    pub value: f64,
    pub scale: f64,
}

impl OdeResidual {
    fn from_terms(name: &str, terms: &[f64]) -> Self {
        OdeResidual {
            name: name.to_string(),
            value: terms.iter().sum(),
            scale: terms.iter().map(|t| t.abs()).sum(),
        }
    }

    /// `|value| / scale`, or `|value|` when every term vanishes.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value.abs() / self.scale
        } else {
            self.value.abs()
        }
    }
}

/// Residuals of `system` for the potentials `phi`, `psi` at radius `r` (3D).
pub fn ode_residuals(system: OdeSystem, phi: &RadialProfile, psi: &RadialProfile, r: f64) -> Result<Vec<OdeResidual>> {
    let (op, os) = system.orders();
    let f = phi.d_powers(r, op)?;
    let g = psi.d_powers(r, os)?;
    let s = r * r;
    // [Δ, DΔ, D²Δ, D³Δ]
    let lf = lap_powers(&f, s, 3, op.saturating_sub(1));
    let lg = lap_powers(&g, s, 3, os.saturating_sub(1));
    let res = OdeResidual::from_terms;
    Ok(match system {
        OdeSystem::Pair12 => vec![
            res("pair_phi", &[r * g[1] * f[2], -r * f[1] * g[2]]),
            res("pair_psi", &[r * f[1] * f[2], r * g[1] * lg[2]]),
        ],
        OdeSystem::Constraints11 => vec![
            res("nr_phi", &[r * f[2] * f[2], r * f[1] * f[3]]),
            res("nr_psi", &[r * g[2] * g[2], r * g[1] * g[3]]),
            res("nr_mixed", &[2.0 * r * f[2] * g[2], r * g[1] * f[3], r * f[1] * g[3]]),
            res("phi_quadratic", &[r * f[2]]),
            res("psi_quadratic", &[r * g[2]]),
        ],
        OdeSystem::Constraints22 => vec![
            res("phi_a", &[s * f[1] * lf[2]]),
            res("phi_b", &[s * g[2] * lf[1], 2.0 * s * g[1] * lf[2], -s * lg[1] * f[2]]),
            res("psi_a", &[s * f[2] * lg[1], 2.0 * s * f[1] * lg[2], -s * lf[1] * g[2]]),
            res("psi_b", &[s * g[1] * lg[2]]),
        ],
        OdeSystem::Constraints12Perp => vec![
            res("phi_rigid", &[2.0 * r * f[1] * f[2]]),
            res("psi_outer", &[r * g[2] * lg[2], r * g[1] * lg[3]]),
            res("psi_inner", &[s * g[1] * lg[2]]),
            res("mixed", &[r * f[2] * lg[1], r * f[1] * lg[2]]),
        ],
    })
}

/// Side of the integrated aligned (1,2) system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingSide {
    PhiSide,
    PsiSide,
}

/// `∫₀^r 2ρ (…) dρ` of the chosen residual combination of the aligned pair.
///
/// Solutions of the pair make both integrals vanish identically in `r`.
pub fn coupling_integral(phi: &RadialProfile, psi: &RadialProfile, r: f64, side: CouplingSide) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::OutOfRange { r, min: 0.0, max: f64::INFINITY });
    }
    let failure: Cell<Option<Error>> = Cell::new(None);
    let integrand = |rho: f64| -> f64 {
        let eval = || -> Result<f64> {
            let f = phi.d_powers(rho, 2)?;
            Ok(match side {
                CouplingSide::PhiSide => {
                    let g = psi.d_powers(rho, 2)?;
                    2.0 * rho * (g[1] * f[2] - f[1] * g[2])
                }
                CouplingSide::PsiSide => {
                    let g = psi.d_powers(rho, 4)?;
                    let lg = lap_powers(&g, rho * rho, 3, 3);
                    2.0 * rho * (f[1] * f[2] + g[1] * lg[2])
                }
            })
        };
        match eval() {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let v = integrate(integrand, 0.0, r, ABS_TOL, REL_TOL)?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

fn coeffs(p: &RadialProfile, what: &str) -> Result<[f64; 3]> {
    p.quartic_coeffs().ok_or_else(|| {
        Error::Predicate(format!("{what} must be an even polynomial of degree at most 4"))
    })
}

fn nearly_equal(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * (x.abs() + y.abs())
}

/// Perpendicular (1,2) family: `φ = f2 r² + f0`, `ψ = g4 r⁴ + g2 r² + g0`
/// with `f2 g4 = 0`.
pub fn check_rep12_perp(phi: &RadialProfile, psi: &RadialProfile) -> Result<()> {
    let [_, f2, f4] = coeffs(phi, "phi")?;
    let [_, _, g4] = coeffs(psi, "psi")?;
    if f4 != 0.0 {
        return Err(Error::Predicate(format!("phi must be quadratic, found r^4 coefficient {f4}")));
    }
    if !nearly_equal(f2 * g4, 0.0) {
        return Err(Error::Predicate(format!("f2·g4 = {} must vanish", f2 * g4)));
    }
    Ok(())
}

/// (2,2) family: both quartic with `f2 g4 = f4 g2`.
pub fn check_rep22(phi: &RadialProfile, psi: &RadialProfile) -> Result<()> {
    let [_, f2, f4] = coeffs(phi, "phi")?;
    let [_, g2, g4] = coeffs(psi, "psi")?;
    if !nearly_equal(f2 * g4, f4 * g2) {
        return Err(Error::Predicate(format!(
            "f2·g4 = {} differs from f4·g2 = {}",
            f2 * g4,
            f4 * g2
        )));
    }
    Ok(())
}

/// (1,1) family: both potentials quadratic.
pub fn check_rep11(phi: &RadialProfile, psi: &RadialProfile) -> Result<()> {
    for (p, what) in [(phi, "phi"), (psi, "psi")] {
        let [_, _, c4] = coeffs(p, what)?;
        if c4 != 0.0 {
            return Err(Error::Predicate(format!("{what} must be quadratic, found r^4 coefficient {c4}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_rel(v: &[OdeResidual]) -> f64 {
        v.iter().map(|r| r.value.abs()).fold(0.0, f64::max)
    }

    #[test]
    fn sinc_pair_solves_aligned_system() {
        let lam = 1.4;
        let phi = RadialProfile::sinc(lam, lam, 0.0);
        let psi = RadialProfile::sinc(lam, 1.0, 0.0);
        for r in [0.0, 0.2, 1.0, 3.7, 8.0] {
            let res = ode_residuals(OdeSystem::Pair12, &phi, &psi, r).unwrap();
            for x in &res {
                assert!(x.value.abs() <= 1e-12 * x.scale.max(1.0), "{r} {x:?}");
            }
        }
    }

    #[test]
    fn mismatched_amplitude_fails_aligned_system() {
        let phi = RadialProfile::sinc(1.4, 1.0, 0.0);
        let psi = RadialProfile::sinc(1.4, 1.0, 0.0);
        let res = ode_residuals(OdeSystem::Pair12, &phi, &psi, 1.0).unwrap();
        assert!(res[1].relative() > 1e-3);
    }

    #[test]
    fn quadratics_solve_constraints11_but_cubic_does_not() {
        let q = RadialProfile::poly(&[(2, 0.8), (0, 1.0)]);
        let res = ode_residuals(OdeSystem::Constraints11, &q, &q, 1.3).unwrap();
        assert_eq!(max_rel(&res), 0.0);
        let c = RadialProfile::poly(&[(3, 1.0)]);
        let res = ode_residuals(OdeSystem::Constraints11, &c, &q, 1.3).unwrap();
        assert!(res.iter().any(|x| x.relative() > 0.1));
    }

    #[test]
    fn quartics_solve_constraints22_and_perp() {
        let phi = RadialProfile::poly(&[(4, 0.3), (2, 0.6)]);
        let psi = RadialProfile::poly(&[(4, 0.5), (2, 1.0)]);
        for r in [0.0, 0.5, 2.0] {
            let res = ode_residuals(OdeSystem::Constraints22, &phi, &psi, r).unwrap();
            assert!(res.iter().all(|x| x.value.abs() <= 1e-12 * x.scale.max(1.0)));
        }
        let phi = RadialProfile::poly(&[(2, 0.6)]);
        let res = ode_residuals(OdeSystem::Constraints12Perp, &phi, &psi, 1.1).unwrap();
        assert!(res.iter().all(|x| x.value.abs() <= 1e-12 * x.scale.max(1.0)));
    }

    #[test]
    fn coupling_of_quadratic_and_quartic() {
        // Dφ = 2, D²φ = 0, Dψ = 4r², D²ψ = 8: integrand -32ρ
        let phi = RadialProfile::poly(&[(2, 1.0)]);
        let psi = RadialProfile::poly(&[(4, 1.0)]);
        for r in [0.5, 1.0, 2.0] {
            let v = coupling_integral(&phi, &psi, r, CouplingSide::PhiSide).unwrap();
            assert!((v + 16.0 * r * r).abs() < 1e-12 * (16.0 * r * r));
        }
    }

    #[test]
    fn coupling_vanishes_for_sinc_pair() {
        let phi = RadialProfile::sinc(2.0, 2.0, 0.0);
        let psi = RadialProfile::sinc(2.0, 1.0, 0.0);
        for side in [CouplingSide::PhiSide, CouplingSide::PsiSide] {
            let v = coupling_integral(&phi, &psi, 4.0, side).unwrap();
            assert!(v.abs() < 1e-10, "{side:?} {v}");
        }
    }

    #[test]
    fn coupling_reports_singular_profiles() {
        let phi = RadialProfile::sinc(2.0, 0.0, 1.0);
        let psi = RadialProfile::sinc(2.0, 1.0, 0.0);
        assert!(coupling_integral(&phi, &psi, 1.0, CouplingSide::PhiSide).is_err());
    }

    #[test]
    fn polynomial_predicates() {
        let f2 = RadialProfile::poly(&[(2, 1.0)]);
        let g2 = RadialProfile::poly(&[(2, 3.0), (0, 1.0)]);
        let g4 = RadialProfile::poly(&[(4, 1.0), (2, 2.0)]);
        assert!(check_rep12_perp(&f2, &g2).is_ok());
        assert!(check_rep12_perp(&f2, &g4).is_err());
        assert!(check_rep12_perp(&RadialProfile::zero(), &g4).is_ok());
        let f = RadialProfile::poly(&[(4, 2.0), (2, 4.0)]);
        assert!(check_rep22(&f, &g4).is_ok());
        assert!(check_rep22(&f, &g2).is_err());
        assert!(check_rep11(&f2, &g2).is_ok());
        assert!(check_rep11(&f2, &g4).is_err());
        assert!(check_rep11(&RadialProfile::gaussian(1.0, 1.0), &g2).is_err());
    }
}
