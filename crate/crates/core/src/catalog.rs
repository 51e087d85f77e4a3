//! Closed-form exact solutions of the static Euler and Navier–Stokes equations.
//!
//! Every family here has radial potentials that evolve by the heat semigroup
//! (`φ(t) = e^{νtΔ}φ0`, likewise ψ) while the nonlinear term is balanced by a
//! pressure at each instant. Sampling is pointwise; no grid is involved.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::frames::{check_frames, cross, dot, FrameVector, Potential, Rep12Mode, RepKind, SymplecticRep};
use crate::radial::closed_form::{jacobian_from_powers, laplacian_of_powers, velocity_from_powers};
use crate::radial::odes::{check_rep11, check_rep12_perp, check_rep22, ode_residuals, OdeSystem};
use crate::radial::quadrature::{integrate, ABS_TOL, REL_TOL};
use crate::radial::{chebyshev_radii, heat_evolve_radial, vorticity_closed_form, BumpTemplate, RadialProfile};

/// Radius excluded around the singular `cos(λr)/r` part.
pub const SINGULAR_CORE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "beltrami")]
    Beltrami3D,
    #[serde(rename = "poly12perp")]
    Poly12Perp,
    #[serde(rename = "poly11")]
    Poly11,
    #[serde(rename = "poly22")]
    Poly22,
    #[serde(rename = "bump2d")]
    StaticEuler2DBump,
    #[serde(rename = "periodic2d")]
    StaticEuler2DPeriodic,
    #[serde(rename = "heat2d")]
    Heat2DRadial,
    #[serde(rename = "radialpair12")]
    RadialPair12,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Beltrami3D,
        Family::Poly12Perp,
        Family::Poly11,
        Family::Poly22,
        Family::StaticEuler2DBump,
        Family::StaticEuler2DPeriodic,
        Family::Heat2DRadial,
        Family::RadialPair12,
    ];

    /// Name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Family::Beltrami3D => "beltrami",
            Family::Poly12Perp => "poly12perp",
            Family::Poly11 => "poly11",
            Family::Poly22 => "poly22",
            Family::StaticEuler2DBump => "bump2d",
            Family::StaticEuler2DPeriodic => "periodic2d",
            Family::Heat2DRadial => "heat2d",
            Family::RadialPair12 => "radialpair12",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Family::StaticEuler2DBump | Family::StaticEuler2DPeriodic | Family::Heat2DRadial => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown family '{s}'")))
    }
}

/// How the velocity depends on time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDependence {
    Static,
    /// `u(t) = e^{-rate·t} u(0)`
    Exponential,
    /// Potentials follow the heat semigroup; `u_t = νΔu`.
    HeatSemigroup,
}

/// Closed-form pressure attached to a solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum PressureForm {
    /// `P = −½|u|²`
    Bernoulli,
    /// `u = Ω×x + V`: `P = ½|Ω×x|² − (Ω×V)·x`
    Rigid { omega: [f64; 3], translation: [f64; 3] },
    /// Perpendicular (1,2) quartic with `f2 = 0`, frame vector `b`.
    PerpQuartic { b: [f64; 3] },
    /// Planar radial flow: `P(r) = ∫ ρ (Dφ)² dρ` from the inner radius.
    PlanarRadial,
    /// No closed form; momentum is checked in curl form.
    CurlOnly,
}

/// Radii where a solution may be sampled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub r_min: f64,
    pub r_max: f64,
}

impl Region {
    pub fn contains(&self, r: f64) -> bool {
        r >= self.r_min && r <= self.r_max
    }
}

/// Coefficients of `φ = f4 r⁴ + f2 r² + f0` and `ψ = g4 r⁴ + g2 r² + g0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PolyCoeffs {
    pub f0: f64,
    pub f2: f64,
    pub f4: f64,
    pub g0: f64,
    pub g2: f64,
    pub g4: f64,
}

impl PolyCoeffs {
    fn profiles(&self) -> (RadialProfile, RadialProfile) {
        (
            RadialProfile::poly(&[(0, self.f0), (2, self.f2), (4, self.f4)]),
            RadialProfile::poly(&[(0, self.g0), (2, self.g2), (4, self.g4)]),
        )
    }
}

/// Polynomial families of the exception clauses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyKind {
    Poly12Perp,
    Poly11,
    Poly22,
}

/// Planar static Euler families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StaticKind {
    Bump {
        amplitude: f64,
        ra: f64,
        #[serde(default)]
        template: BumpTemplate,
    },
    Periodic {
        j: f64,
        alpha: f64,
        beta: f64,
        r_min: f64,
        r_max: f64,
    },
}

/// An exact, possibly time-dependent solution with radial potentials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSolution {
    family: Family,
    kind: RepKind,
    a: FrameVector,
    b: FrameVector,
    dim: usize,
    phi: RadialProfile,
    psi: RadialProfile,
    nu: f64,
    decay_rate: f64,
    time_dependence: TimeDependence,
    pressure: PressureForm,
    region: Region,
    params: serde_json::Value,
}

fn check_nu(nu: f64) -> Result<()> {
    if nu >= 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("viscosity must be non-negative, got {nu}")))
    }
}

/// Beltrami field `Φ = λΨ`, `Ψ = α sin(λr)/r + β cos(λr)/r` in the aligned
/// (1,2) representation with frame `a`; `∇×u = −λu`.
pub fn make_beltrami(lambda: f64, alpha: f64, beta: f64, a: FrameVector, nu: f64) -> Result<ExactSolution> {
    check_nu(nu)?;
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidProfile(format!("Beltrami wavenumber must be nonzero, got {lambda}")));
    }
    if alpha == 0.0 && beta == 0.0 {
        return Err(Error::InvalidProfile("Beltrami amplitudes (α, β) are both zero".into()));
    }
    let psi = RadialProfile::sinc(lambda, alpha, beta);
    let phi = RadialProfile::sinc(lambda, lambda * alpha, lambda * beta);
    let r_min = if beta != 0.0 { SINGULAR_CORE } else { 0.0 };
    let rate = nu * lambda * lambda;
    Ok(ExactSolution {
        family: Family::Beltrami3D,
        kind: RepKind::Rep12,
        a,
        b: a,
        dim: 3,
        phi,
        psi,
        nu,
        decay_rate: rate,
        time_dependence: if rate > 0.0 { TimeDependence::Exponential } else { TimeDependence::Static },
        pressure: PressureForm::Bernoulli,
        region: Region { r_min, r_max: f64::INFINITY },
        params: json!({"lambda": lambda, "alpha": alpha, "beta": beta, "a": a, "nu": nu}),
    })
}

/// Polynomial exceptional families.
pub fn make_poly_family(kind: PolyKind, c: PolyCoeffs, a: FrameVector, b: FrameVector, nu: f64) -> Result<ExactSolution> {
    check_nu(nu)?;
    let (phi, psi) = c.profiles();
    let (av, bv) = (a.as_array(), b.as_array());
    let (family, rep, time, pressure) = match kind {
        PolyKind::Poly12Perp => {
            if check_frames(RepKind::Rep12, a, b)? != Some(Rep12Mode::Perpendicular) {
                return Err(Error::InvalidFrame("poly12perp needs A·B = 0 with A ≠ B".into()));
            }
            check_rep12_perp(&phi, &psi)?;
            let pressure = if c.g4 == 0.0 {
                PressureForm::Rigid {
                    omega: av.map(|v| 2.0 * c.f2 * v),
                    translation: bv.map(|v| -4.0 * c.g2 * v),
                }
            } else {
                PressureForm::PerpQuartic { b: bv }
            };
            let moving = c.g4 != 0.0 && nu > 0.0;
            (Family::Poly12Perp, RepKind::Rep12, moving, pressure)
        }
        PolyKind::Poly11 => {
            check_frames(RepKind::Rep11, a, b)?;
            check_rep11(&phi, &psi)?;
            let omega = [0, 1, 2].map(|i| 2.0 * (c.f2 * av[i] + c.g2 * bv[i]));
            (
                Family::Poly11,
                RepKind::Rep11,
                false,
                PressureForm::Rigid { omega, translation: [0.0; 3] },
            )
        }
        PolyKind::Poly22 => {
            check_frames(RepKind::Rep22, a, b)?;
            check_rep22(&phi, &psi)?;
            let moving = (c.f4 != 0.0 || c.g4 != 0.0) && nu > 0.0;
            (Family::Poly22, RepKind::Rep22, moving, PressureForm::CurlOnly)
        }
    };
    Ok(ExactSolution {
        family,
        kind: rep,
        a,
        b,
        dim: 3,
        phi,
        psi,
        nu,
        decay_rate: 0.0,
        time_dependence: if time { TimeDependence::HeatSemigroup } else { TimeDependence::Static },
        pressure,
        region: Region { r_min: 0.0, r_max: f64::INFINITY },
        params: json!({"coeffs": c, "a": a, "b": b, "nu": nu}),
    })
}

fn planar(family: Family, phi: RadialProfile, nu: f64, time: TimeDependence, region: Region, params: serde_json::Value) -> ExactSolution {
    ExactSolution {
        family,
        kind: RepKind::Rep11,
        a: FrameVector::e3(),
        b: FrameVector::e3(),
        dim: 2,
        phi,
        psi: RadialProfile::zero(),
        nu,
        decay_rate: 0.0,
        time_dependence: time,
        pressure: PressureForm::PlanarRadial,
        region,
        params,
    }
}

/// Planar static Euler flows `u = (−∂2φ0, ∂1φ0)` with radial `φ0`.
pub fn make_static_euler_2d(kind: StaticKind) -> Result<ExactSolution> {
    let params = serde_json::to_value(kind)?;
    match kind {
        StaticKind::Bump { amplitude, ra, template } => {
            let phi = RadialProfile::CompactBump { amplitude, ra, template };
            phi.validate()?;
            let region = Region { r_min: 0.0, r_max: f64::INFINITY };
            Ok(planar(Family::StaticEuler2DBump, phi, 0.0, TimeDependence::Static, region, params))
        }
        StaticKind::Periodic { j, alpha, beta, r_min, r_max } => {
            if !(j >= 1.0 && j.fract() == 0.0) {
                return Err(Error::InvalidProfile(format!("periodic wavenumber must be an integer ≥ 1, got {j}")));
            }
            if !(r_min > 0.0 && r_max > r_min) {
                return Err(Error::InvalidProfile(format!("invalid annulus [{r_min}, {r_max}]")));
            }
            let phi = RadialProfile::trig(j, alpha, beta, r_min);
            phi.validate()?;
            let region = Region { r_min, r_max };
            Ok(planar(Family::StaticEuler2DPeriodic, phi, 0.0, TimeDependence::Static, region, params))
        }
    }
}

/// Planar Navier–Stokes flow whose stream function is the heat evolution of a
/// decaying radial `φ0`.
pub fn make_heat_2d(phi0: RadialProfile, nu: f64) -> Result<ExactSolution> {
    check_nu(nu)?;
    phi0.validate()?;
    if !phi0.decays() {
        return Err(Error::InvalidProfile(format!(
            "{} profile does not decay and has no heat evolution",
            phi0.family_name()
        )));
    }
    if let RadialProfile::SincPair { .. } = phi0 {
        return Err(Error::InvalidProfile("sinc pairs are not planar heat data".into()));
    }
    let r_max = match &phi0 {
        RadialProfile::Tabulated(t) => t.r_max(),
        _ => f64::INFINITY,
    };
    let params = json!({"phi0": phi0, "nu": nu});
    Ok(planar(
        Family::Heat2DRadial,
        phi0,
        nu,
        TimeDependence::HeatSemigroup,
        Region { r_min: 0.0, r_max },
        params,
    ))
}

/// Aligned (1,2) solution from any pair solving the coupled radial system,
/// checked at 64 Chebyshev radii on `[r_lo, r_hi]`.
pub fn make_radial_pair12(phi: RadialProfile, psi: RadialProfile, a: FrameVector, nu: f64, r_lo: f64, r_hi: f64) -> Result<ExactSolution> {
    check_nu(nu)?;
    phi.validate()?;
    psi.validate()?;
    let mut worst = 0.0f64;
    for r in chebyshev_radii(64, r_lo, r_hi) {
        for res in ode_residuals(OdeSystem::Pair12, &phi, &psi, r)? {
            worst = worst.max(res.relative());
        }
    }
    if worst > 1e-8 {
        return Err(Error::Predicate(format!(
            "profiles do not solve the aligned radial pair (relative residual {worst:e})"
        )));
    }
    let (lo_phi, hi_phi) = phi.valid_range();
    let (lo_psi, hi_psi) = psi.valid_range();
    let time = if nu > 0.0 { TimeDependence::HeatSemigroup } else { TimeDependence::Static };
    Ok(ExactSolution {
        family: Family::RadialPair12,
        kind: RepKind::Rep12,
        a,
        b: a,
        dim: 3,
        params: json!({"phi": phi, "psi": psi, "a": a, "nu": nu}),
        phi,
        psi,
        nu,
        decay_rate: 0.0,
        time_dependence: time,
        pressure: PressureForm::CurlOnly,
        region: Region { r_min: lo_phi.max(lo_psi), r_max: hi_phi.min(hi_psi) },
    })
}

/// One evaluated sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointSample {
    pub x: [f64; 3],
    pub u: [f64; 3],
    /// `None` when the family has no closed-form pressure.
    pub p: Option<f64>,
    pub dudt: [f64; 3],
}

impl ExactSolution {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn frames(&self) -> (FrameVector, FrameVector) {
        (self.a, self.b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    pub fn time_dependence(&self) -> TimeDependence {
        self.time_dependence
    }

    pub fn pressure_form(&self) -> PressureForm {
        self.pressure
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn params(&self) -> &serde_json::Value {
        &self.params
    }

    /// Initial potentials.
    pub fn potentials(&self) -> (&RadialProfile, &RadialProfile) {
        (&self.phi, &self.psi)
    }

    /// The representation with the initial potentials.
    pub fn rep(&self) -> Result<SymplecticRep> {
        let (phi, psi) = (Potential::Radial(self.phi.clone()), Potential::Radial(self.psi.clone()));
        if self.dim == 2 {
            SymplecticRep::planar(phi)
        } else {
            SymplecticRep::new(self.kind, self.a, self.b, phi, psi)
        }
    }

    /// The solution frozen at time `t`.
    pub fn at(&self, t: f64) -> Result<SolutionState<'_>> {
        if !(t >= 0.0) {
            return Err(Error::Config(format!("time must be non-negative, got {t}")));
        }
        let tau = self.nu * t;
        let (phi, psi) = match self.time_dependence {
            TimeDependence::Static => (self.phi.clone(), self.psi.clone()),
            _ => (
                heat_evolve_radial(&self.phi, tau, self.dim)?,
                heat_evolve_radial(&self.psi, tau, self.dim)?,
            ),
        };
        Ok(SolutionState { sol: self, t, phi, psi })
    }

    /// Spacing for finite-difference checks, resolving the finest profile feature.
    pub fn stencil_step(&self) -> f64 {
        let step = |p: &RadialProfile| match p {
            RadialProfile::CompactBump { ra, .. } => 1e-3 * ra,
            RadialProfile::Polynomial { .. } => 0.02,
            other => 0.02 * other.scale().min(1.0),
        };
        step(&self.phi).min(step(&self.psi))
    }

    /// Radius of `x` as seen by the solution (planar solutions ignore `x3`).
    pub fn radius(&self, x: [f64; 3]) -> f64 {
        if self.dim == 2 {
            x[0].hypot(x[1])
        } else {
            dot(x, x).sqrt()
        }
    }
}

/// A solution evaluated at a fixed time.
#[derive(Debug, Clone)]
pub struct SolutionState<'a> {
    sol: &'a ExactSolution,
    t: f64,
    phi: RadialProfile,
    psi: RadialProfile,
}

fn orders(kind: RepKind, extra: usize) -> (usize, usize) {
    match kind {
        RepKind::Rep11 => (1 + extra, 1 + extra),
        RepKind::Rep12 => (1 + extra, 2 + extra),
        RepKind::Rep22 => (2 + extra, 2 + extra),
    }
}

impl<'a> SolutionState<'a> {
    pub fn solution(&self) -> &'a ExactSolution {
        self.sol
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn potentials(&self) -> (&RadialProfile, &RadialProfile) {
        (&self.phi, &self.psi)
    }

    fn powers(&self, r: f64, extra: usize) -> Result<([f64; 6], [f64; 6])> {
        let (op, os) = orders(self.sol.kind, extra);
        let os = if self.sol.dim == 2 { 0 } else { os };
        Ok((self.phi.d_powers(r, op)?, self.psi.d_powers(r, os)?))
    }

    pub fn velocity(&self, x: [f64; 3]) -> Result<[f64; 3]> {
        let r = self.sol.radius(x);
        let (f, g) = self.powers(r, 0)?;
        let s = self.sol;
        Ok(velocity_from_powers(s.kind, s.a.as_array(), s.b.as_array(), &f, &g, x, s.dim))
    }

    /// `J[i][j] = ∂_j u_i`
    pub fn jacobian(&self, x: [f64; 3]) -> Result<[[f64; 3]; 3]> {
        let r = self.sol.radius(x);
        let (f, g) = self.powers(r, 1)?;
        let s = self.sol;
        Ok(jacobian_from_powers(s.kind, s.a.as_array(), s.b.as_array(), &f, &g, x, s.dim))
    }

    pub fn vorticity(&self, x: [f64; 3]) -> Result<[f64; 3]> {
        let s = self.sol;
        vorticity_closed_form(s.kind, &s.a, &s.b, &self.phi, &self.psi, x, s.dim)
    }

    /// `Δu`, i.e. the velocity of `(Δφ, Δψ)`.
    pub fn laplacian(&self, x: [f64; 3]) -> Result<[f64; 3]> {
        let r = self.sol.radius(x);
        let (f, g) = self.powers(r, 2)?;
        let s = self.sol;
        let lf = laplacian_of_powers(&f, r, s.dim);
        let lg = laplacian_of_powers(&g, r, s.dim);
        Ok(velocity_from_powers(s.kind, s.a.as_array(), s.b.as_array(), &lf, &lg, x, s.dim))
    }

    /// `(u·∇)u`
    pub fn advection(&self, x: [f64; 3]) -> Result<[f64; 3]> {
        let u = self.velocity(x)?;
        let j = self.jacobian(x)?;
        Ok([0, 1, 2].map(|i| j[i][0] * u[0] + j[i][1] * u[1] + j[i][2] * u[2]))
    }

    /// `∂t u`
    pub fn time_derivative(&self, x: [f64; 3]) -> Result<[f64; 3]> {
        match self.sol.time_dependence {
            TimeDependence::Static => Ok([0.0; 3]),
            TimeDependence::Exponential => {
                let u = self.velocity(x)?;
                Ok(u.map(|v| -self.sol.decay_rate * v))
            }
            TimeDependence::HeatSemigroup => Ok(self.laplacian(x)?.map(|v| self.sol.nu * v)),
        }
    }

    pub fn pressure(&self, x: [f64; 3]) -> Result<Option<f64>> {
        let x = if self.sol.dim == 2 { [x[0], x[1], 0.0] } else { x };
        Ok(match self.sol.pressure {
            PressureForm::Bernoulli => {
                let u = self.velocity(x)?;
                Some(-0.5 * dot(u, u))
            }
            PressureForm::Rigid { omega, translation } => {
                let w = cross(omega, x);
                Some(0.5 * dot(w, w) - dot(cross(omega, translation), x))
            }
            PressureForm::PerpQuartic { b } => {
                let [_, g2, g4] = self.psi.quartic_coeffs().unwrap_or_default();
                let u = self.velocity(x)?;
                let beta = dot(b, x);
                let (s, b2) = (dot(x, x), dot(b, b));
                let q = 40.0 * g4 * (-4.0 * g4 * beta * beta * s + 4.0 * g4 * b2 * s * s - 2.0 * g2 * beta * beta + 2.0 * g2 * b2 * s);
                Some(q - 0.5 * dot(u, u))
            }
            PressureForm::PlanarRadial => Some(self.planar_pressure_between(self.sol.region.r_min, self.sol.radius(x))?),
            PressureForm::CurlOnly => None,
        })
    }

    /// `P(to) − P(from)`. Planar radial pressures are integrated over the
    /// short radial interval directly, which keeps full relative accuracy
    /// for finite-difference gradients.
    pub fn pressure_difference(&self, from: [f64; 3], to: [f64; 3]) -> Result<Option<f64>> {
        if self.sol.pressure == PressureForm::PlanarRadial {
            return Ok(Some(self.planar_pressure_between(self.sol.radius(from), self.sol.radius(to))?));
        }
        Ok(match (self.pressure(from)?, self.pressure(to)?) {
            (Some(a), Some(b)) => Some(b - a),
            _ => None,
        })
    }

    /// `∫ ρ (∂ρφ/ρ)² dρ` from `r0` to `r1`.
    fn planar_pressure_between(&self, r0: f64, r1: f64) -> Result<f64> {
        let phi = &self.phi;
        let mut bad = None;
        let v = integrate(
            |rho| match phi.d_powers(rho, 1) {
                Ok(d) => rho * d[1] * d[1],
                Err(e) => {
                    bad = Some(e);
                    0.0
                }
            },
            r0,
            r1,
            ABS_TOL,
            REL_TOL,
        )?;
        match bad {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

/// Samples `(u, P, ∂t u)` at `points`; every point must lie in the validity region.
pub fn sample_solution(sol: &ExactSolution, t: f64, points: &[[f64; 3]]) -> Result<Vec<PointSample>> {
    let outside: Vec<[f64; 3]> = points
        .iter()
        .copied()
        .filter(|&x| !sol.region.contains(sol.radius(x)))
        .collect();
    if let Some(&first) = outside.first() {
        return Err(Error::OutsideRegion { count: outside.len(), first });
    }
    let state = sol.at(t)?;
    points
        .iter()
        .map(|&x| {
            Ok(PointSample {
                x,
                u: state.velocity(x)?,
                p: state.pressure(x)?,
                dudt: state.time_derivative(x)?,
            })
        })
        .collect()
}
