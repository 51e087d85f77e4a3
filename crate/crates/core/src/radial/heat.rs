//! The heat semigroup `e^{τΔ}` acting on radial profiles.

use std::collections::BTreeMap;

use super::quadrature::gauss_hermite;
use super::{check_dim, PolyTerm, RadialProfile, TabulatedProfile};
use crate::error::{Error, Result};

/// Gauss–Hermite nodes used for a single radius.
const NODES_3D: usize = 160;
const NODES_2D: usize = 96;
/// Radii in the table produced for profiles without a closed form.
const TABLE_POINTS: usize = 401;
/// Radius below which the 3D formula is evaluated at this value instead.
const R_FLOOR: f64 = 1e-5;

/// `e^{τΔ} p` in dimension `dim`.
///
/// Sinc pairs (3D), even polynomials and Gaussians map to the same family.
/// Bumps and tabulated data are convolved numerically with the heat kernel
/// and returned as a tabulated profile. Trigonometric profiles, odd
/// polynomials and planar sinc pairs are rejected.
pub fn heat_evolve_radial(p: &RadialProfile, tau: f64, dim: usize) -> Result<RadialProfile> {
    check_dim(dim)?;
    p.validate()?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidProfile(format!("heat time must be non-negative, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(p.clone());
    }
    match p {
        RadialProfile::SincPair { lambda, alpha, beta } => {
            if dim != 3 {
                return Err(Error::InvalidProfile(
                    "sinc pairs are Helmholtz eigenfunctions only in 3D".into(),
                ));
            }
            let decay = (-lambda * lambda * tau).exp();
            Ok(RadialProfile::sinc(*lambda, alpha * decay, beta * decay))
        }
        RadialProfile::Polynomial { terms } => polynomial_heat(terms, tau, dim),
        RadialProfile::Gaussian { amplitude, width } => {
            let w2 = width * width;
            let grown = w2 + 4.0 * tau;
            Ok(RadialProfile::gaussian(
                amplitude * (w2 / grown).powf(dim as f64 / 2.0),
                grown.sqrt(),
            ))
        }
        RadialProfile::TrigPeriodic { .. } => Err(Error::InvalidProfile(
            "trigonometric profiles have no radial heat evolution".into(),
        )),
        RadialProfile::CompactBump { ra, .. } => tabulate(p, tau, dim, *ra),
        RadialProfile::Tabulated(t) => tabulate(p, tau, dim, t.r_max()),
    }
}

fn polynomial_heat(terms: &[PolyTerm], tau: f64, dim: usize) -> Result<RadialProfile> {
    // power/2 -> (coeff, rate)
    let mut cur: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    for t in terms {
        if t.power % 2 == 1 {
            if t.coeff == 0.0 && t.rate == 0.0 {
                continue;
            }
            return Err(Error::InvalidProfile(format!(
                "odd power r^{} is not smooth at the origin",
                t.power
            )));
        }
        let e = cur.entry(t.power / 2).or_default();
        e.0 += t.coeff;
        e.1 += t.rate;
    }
    let mut out = cur.clone();
    let mut factor = 1.0;
    let d = dim as f64;
    for k in 1.. {
        let mut next = BTreeMap::new();
        for (&m, &(c, rate)) in &cur {
            if m == 0 {
                continue;
            }
            let mf = m as f64;
            let l = 2.0 * mf * (2.0 * mf + d - 2.0);
            let e: &mut (f64, f64) = next.entry(m - 1).or_default();
            e.0 += l * c;
            e.1 += l * rate;
        }
        if next.is_empty() {
            break;
        }
        factor *= tau / k as f64;
        for (&m, &(c, rate)) in &next {
            let e = out.entry(m).or_default();
            e.0 += factor * c;
            e.1 += factor * rate;
        }
        cur = next;
    }
    Ok(RadialProfile::Polynomial {
        terms: out
            .into_iter()
            .map(|(m, (coeff, rate))| PolyTerm { power: 2 * m, coeff, rate })
            .collect(),
    })
}

fn tabulate(p: &RadialProfile, tau: f64, dim: usize, support: f64) -> Result<RadialProfile> {
    let r_max = support + 12.0 * tau.sqrt();
    let rule = gauss_hermite(if dim == 3 { NODES_3D } else { NODES_2D });
    let r: Vec<f64> = (0..TABLE_POINTS)
        .map(|i| r_max * i as f64 / (TABLE_POINTS - 1) as f64)
        .collect();
    let values = r
        .iter()
        .map(|&ri| quadrature_with(p, tau, dim, ri, &rule))
        .collect::<Result<Vec<_>>>()?;
    Ok(RadialProfile::Tabulated(TabulatedProfile::new(r, values)?))
}

/// Value of `p` treating tabulated data as zero past its last radius.
fn value_extended(p: &RadialProfile, r: f64) -> Result<f64> {
    match p {
        RadialProfile::Tabulated(t) if r > t.r_max() => Ok(0.0),
        _ => p.value(r),
    }
}

/// `(e^{τΔ} p)(r)` by Gauss–Hermite quadrature of the heat kernel.
///
/// Independent of the closed forms used by [`heat_evolve_radial`], so the
/// two can be checked against each other.
pub fn heat_quadrature(p: &RadialProfile, tau: f64, dim: usize, r: f64) -> Result<f64> {
    check_dim(dim)?;
    if !(tau > 0.0) {
        return if tau == 0.0 {
            value_extended(p, r)
        } else {
            Err(Error::InvalidProfile(format!("heat time must be non-negative, got {tau}")))
        };
    }
    let rule = gauss_hermite(if dim == 3 { NODES_3D } else { NODES_2D });
    quadrature_with(p, tau, dim, r, &rule)
}

fn quadrature_with(p: &RadialProfile, tau: f64, dim: usize, r: f64, rule: &(Vec<f64>, Vec<f64>)) -> Result<f64> {
    let (z, w) = rule;
    let spread = 2.0 * tau.sqrt();
    if dim == 3 {
        // odd extension of ρ f(ρ) reduces the 3D kernel to a 1D one
        let re = r.max(R_FLOOR);
        let mut acc = 0.0;
        for (zi, wi) in z.iter().zip(w) {
            let rho = re + spread * zi;
            acc += wi * rho * value_extended(p, rho.abs())?;
        }
        Ok(acc / (re * std::f64::consts::PI.sqrt()))
    } else {
        let mut acc = 0.0;
        for (zi, wi) in z.iter().zip(w) {
            let x = r + spread * zi;
            for (zj, wj) in z.iter().zip(w) {
                let y = spread * zj;
                acc += wi * wj * value_extended(p, x.hypot(y))?;
            }
        }
        Ok(acc / std::f64::consts::PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_gains_quadratic_drift() {
        let p = RadialProfile::poly(&[(4, 1.0)]);
        let q = heat_evolve_radial(&p, 0.5, 3).unwrap();
        // r^4 + τ·20 r² + τ²/2·120
        let c = q.quartic_coeffs().unwrap();
        assert!((c[2] - 1.0).abs() < 1e-15);
        assert!((c[1] - 10.0).abs() < 1e-14);
        assert!((c[0] - 15.0).abs() < 1e-14);
        let q2 = heat_evolve_radial(&p, 0.5, 2).unwrap().quartic_coeffs().unwrap();
        assert!((q2[1] - 8.0).abs() < 1e-14);
    }

    #[test]
    fn odd_powers_and_trig_are_rejected() {
        assert!(heat_evolve_radial(&RadialProfile::poly(&[(3, 1.0)]), 0.1, 3).is_err());
        assert!(heat_evolve_radial(&RadialProfile::trig(1.0, 1.0, 0.0, 0.1), 0.1, 3).is_err());
        assert!(heat_evolve_radial(&RadialProfile::sinc(1.0, 1.0, 0.0), 0.1, 2).is_err());
    }

    #[test]
    fn gaussian_matches_quadrature() {
        let g = RadialProfile::gaussian(1.5, 0.8);
        for dim in [2, 3] {
            let e = heat_evolve_radial(&g, 0.2, dim).unwrap();
            for r in [0.0, 0.4, 1.5, 3.0] {
                let a = e.value(r).unwrap();
                let b = heat_quadrature(&g, 0.2, dim, r).unwrap();
                assert!((a - b).abs() < 1e-9, "dim {dim} r {r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sinc_matches_quadrature() {
        let p = RadialProfile::sinc(1.3, 1.0, 0.0);
        let e = heat_evolve_radial(&p, 0.1, 3).unwrap();
        for r in [0.0, 0.7, 2.5, 5.0] {
            let a = e.value(r).unwrap();
            let b = heat_quadrature(&p, 0.1, 3, r).unwrap();
            assert!((a - b).abs() < 1e-8, "r {r}: {a} vs {b}");
        }
    }

    #[test]
    fn bump_spreads_and_keeps_mass() {
        let p = RadialProfile::bump(1.0, 1.0);
        let e = heat_evolve_radial(&p, 0.05, 3).unwrap();
        assert!(matches!(e, RadialProfile::Tabulated(_)));
        // mass 4π∫ r² f dr is conserved
        let mass = |f: &dyn Fn(f64) -> f64, rmax: f64| {
            super::super::quadrature::integrate(|r| r * r * f(r), 0.0, rmax, 1e-12, 1e-9).unwrap()
        };
        let m0 = mass(&|r| p.value(r).unwrap(), 1.0);
        let rmax = match &e {
            RadialProfile::Tabulated(t) => t.r_max(),
            _ => unreachable!(),
        };
        let m1 = mass(&|r| e.value(r).unwrap(), rmax);
        assert!((m0 - m1).abs() < 1e-4 * m0, "{m0} {m1}");
        assert!(e.value(1.2).unwrap() > 0.0);
    }
}
