//! Frame vectors and the symplectic representations of a divergence-free
//! velocity by two scalar potentials.
//!
//! With `C_A = A×∇` and `W_A = (A×∇)×∇ = (A·∇)∇ − AΔ`:
//!
//! | kind  | velocity            | vorticity                 |
//! |-------|---------------------|---------------------------|
//! | Rep11 | `C_A φ + C_B ψ`     | `−W_A φ − W_B ψ`          |
//! | Rep12 | `C_A φ + W_B ψ`     | `−W_A φ + C_B Δψ`         |
//! | Rep22 | `W_A φ + W_B ψ`     | `C_A Δφ + C_B Δψ`         |
//!
//! In Fourier space `C_A ↦ i(A×ξ)` and `W_A ↦ A|ξ|² − (A·ξ)ξ`, both
//! orthogonal to `ξ`. Recovery dots `û` (or `ω̂`) with the symbol that
//! annihilates the other potential.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::ops::{curl_hat, to_hat, to_real};
use crate::grid::{Grid, GridField};
use crate::radial::RadialProfile;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Relative symbol cutoff used when dividing mode by mode.
pub const KILL_EPS: f64 = 1e-8;

/// A nonzero constant vector in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct FrameVector([f64; 3]);

impl TryFrom<[f64; 3]> for FrameVector {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        FrameVector::new(a)
    }
}

impl From<FrameVector> for [f64; 3] {
    fn from(v: FrameVector) -> Self {
        v.0
    }
}

impl FrameVector {
    pub fn new(a: [f64; 3]) -> Result<Self> {
        if a.iter().any(|v| !v.is_finite()) || norm(a) == 0.0 {
            return Err(Error::InvalidFrame(format!("frame vector {a:?} must be finite and nonzero")));
        }
        Ok(Self(a))
    }

    pub fn e1() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub fn e2() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub fn e3() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(self.0)
    }

    pub fn normalized(&self) -> FrameVector {
        let n = self.norm();
        Self(self.0.map(|v| v / n))
    }
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Which pair of operators acts on `(φ, ψ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepKind {
    Rep11,
    Rep12,
    Rep22,
}

/// The two admissible frame configurations of a (1,2) representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rep12Mode {
    /// `A = B`
    Aligned,
    /// `A·B = 0`
    Perpendicular,
}

/// The operator applied to one potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    /// `A×∇`
    Cross,
    /// `(A×∇)×∇`
    CrossCurl,
}

impl RepKind {
    pub(crate) fn slots(self) -> (Slot, Slot) {
        match self {
            RepKind::Rep11 => (Slot::Cross, Slot::Cross),
            RepKind::Rep12 => (Slot::Cross, Slot::CrossCurl),
            RepKind::Rep22 => (Slot::CrossCurl, Slot::CrossCurl),
        }
    }
}

/// A scalar potential, sampled or closed-form.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Grid(GridField),
    Radial(RadialProfile),
}

impl Potential {
    /// Samples the potential on `grid`; radial profiles are evaluated at `|x|`.
    pub fn to_grid(&self, grid: Grid) -> Result<GridField> {
        match self {
            Potential::Grid(f) => {
                if f.grid() != &grid || !f.is_scalar() {
                    return Err(Error::Shape("potential lives on a different grid".into()));
                }
                Ok(f.clone())
            }
            Potential::Radial(p) => {
                let mut data = Vec::with_capacity(grid.len());
                for i in 0..grid.len() {
                    data.push(p.value(norm(grid.point(i)))?);
                }
                GridField::new(grid, 1, data)
            }
        }
    }
}

/// A velocity field written through two potentials and two frame vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticRep {
    kind: RepKind,
    a: FrameVector,
    b: FrameVector,
    mode: Option<Rep12Mode>,
    dim: usize,
    phi: Potential,
    psi: Potential,
}

impl SymplecticRep {
    /// A 3D representation; frame hypotheses of `kind` are checked.
    pub fn new(kind: RepKind, a: FrameVector, b: FrameVector, phi: Potential, psi: Potential) -> Result<Self> {
        let mode = check_frames(kind, a, b)?;
        for p in [&phi, &psi] {
            if let Potential::Grid(f) = p {
                if f.grid().dim() != 3 || !f.is_scalar() {
                    return Err(Error::Shape("3D representations need 3D scalar potentials".into()));
                }
            }
        }
        if let (Potential::Grid(f), Potential::Grid(g)) = (&phi, &psi) {
            if f.grid() != g.grid() {
                return Err(Error::Shape("potentials live on different grids".into()));
            }
        }
        Ok(Self { kind, a, b, mode, dim: 3, phi, psi })
    }

    /// The planar (1,1) representation `u = (−∂2φ, ∂1φ)`, embedded with `A = B = e3, ψ = 0`.
    pub fn planar(phi: Potential) -> Result<Self> {
        if let Potential::Grid(f) = &phi {
            if f.grid().dim() != 2 || !f.is_scalar() {
                return Err(Error::Shape("planar representation needs a 2D scalar".into()));
            }
        }
        let psi = match &phi {
            Potential::Grid(f) => Potential::Grid(GridField::zeros(*f.grid(), 1)),
            Potential::Radial(_) => Potential::Radial(RadialProfile::zero()),
        };
        Ok(Self {
            kind: RepKind::Rep11,
            a: FrameVector::e3(),
            b: FrameVector::e3(),
            mode: None,
            dim: 2,
            phi,
            psi,
        })
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn a(&self) -> FrameVector {
        self.a
    }

    pub fn b(&self) -> FrameVector {
        self.b
    }

    pub fn mode(&self) -> Option<Rep12Mode> {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phi(&self) -> &Potential {
        &self.phi
    }

    pub fn psi(&self) -> &Potential {
        &self.psi
    }

    /// Replaces closed-form potentials by samples on `grid`.
    pub fn on_grid(&self, grid: Grid) -> Result<SymplecticRep> {
        if grid.dim() != self.dim {
            return Err(Error::Shape(format!(
                "representation is {}D but the grid is {}D",
                self.dim,
                grid.dim()
            )));
        }
        let mut out = self.clone();
        out.phi = Potential::Grid(self.phi.to_grid(grid)?);
        out.psi = Potential::Grid(self.psi.to_grid(grid)?);
        Ok(out)
    }

    fn grid_potentials(&self) -> Result<(&GridField, &GridField)> {
        match (&self.phi, &self.psi) {
            (Potential::Grid(f), Potential::Grid(g)) => Ok((f, g)),
            _ => Err(Error::Shape(
                "grid operation on closed-form potentials; call on_grid first".into(),
            )),
        }
    }
}

/// Validates the frame hypotheses of a 3D representation.
pub fn check_frames(kind: RepKind, a: FrameVector, b: FrameVector) -> Result<Option<Rep12Mode>> {
    let (av, bv) = (a.as_array(), b.as_array());
    let scale = a.norm() * b.norm();
    match kind {
        RepKind::Rep11 | RepKind::Rep22 => {
            if norm(cross(av, bv)) <= 1e-12 * scale {
                return Err(Error::InvalidFrame(format!(
                    "{kind:?} needs linearly independent A and B, got {av:?} and {bv:?}"
                )));
            }
            Ok(None)
        }
        RepKind::Rep12 => {
            let diff = norm([av[0] - bv[0], av[1] - bv[1], av[2] - bv[2]]);
            if diff <= 1e-12 * a.norm() {
                Ok(Some(Rep12Mode::Aligned))
            } else if dot(av, bv).abs() <= 1e-12 * scale {
                Ok(Some(Rep12Mode::Perpendicular))
            } else {
                Err(Error::InvalidFrame(format!(
                    "Rep12 needs A = B or A·B = 0, got {av:?} and {bv:?}"
                )))
            }
        }
    }
}

fn c_symbol(a: [f64; 3], xi: [f64; 3]) -> [Complex64; 3] {
    cross(a, xi).map(|v| I * v)
}

fn w_symbol(a: [f64; 3], xi: [f64; 3]) -> [Complex64; 3] {
    let k2 = dot(xi, xi);
    let ax = dot(a, xi);
    [0, 1, 2].map(|c| Complex64::new(a[c] * k2 - ax * xi[c], 0.0))
}

fn slot_symbol(slot: Slot, a: [f64; 3], xi: [f64; 3]) -> [Complex64; 3] {
    match slot {
        Slot::Cross => c_symbol(a, xi),
        Slot::CrossCurl => w_symbol(a, xi),
    }
}

fn cdot(a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cnorm(a: &[Complex64; 3]) -> f64 {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}

fn apply_slots(grid: &Grid, terms: &[(Slot, [f64; 3], &[Complex64])]) -> GridField {
    let len = grid.len();
    let mut out = vec![vec![ZERO; len]; 3];
    for i in 0..len {
        let xi = grid.xi(i);
        for (slot, a, hat) in terms {
            let s = slot_symbol(*slot, *a, xi);
            for c in 0..3 {
                out[c][i] += s[c] * hat[i];
            }
        }
    }
    let mut data = Vec::with_capacity(3 * len);
    for c in out {
        data.extend(to_real(grid, c));
    }
    GridField::from_parts(*grid, 3, data)
}

fn require_a(a: FrameVector, grid: &Grid) -> Result<()> {
    if grid.dim() == 2 && a.normalized() != FrameVector::e3() {
        return Err(Error::InvalidFrame("on a 2D grid the frame vector must be e3".into()));
    }
    Ok(())
}

/// `(A×∇)φ`. On a 2D grid `A` must be `e3` and the result is `(−∂2φ, ∂1φ)`.
pub fn cross_grad(a: FrameVector, phi: &GridField) -> Result<GridField> {
    if !phi.is_scalar() {
        return Err(Error::Shape("cross_grad expects a scalar potential".into()));
    }
    let grid = *phi.grid();
    require_a(a, &grid)?;
    let hat = to_hat(&grid, phi.data());
    if grid.dim() == 2 {
        let s = a.norm();
        let mut v = curl_hat(&grid, &[hat]);
        // curl of a 2D scalar is (∂2ψ, −∂1ψ) = −(e3×∇)ψ
        for comp in v.iter_mut() {
            comp.iter_mut().for_each(|z| *z *= -s);
        }
        let mut data = Vec::with_capacity(2 * grid.len());
        for c in v {
            data.extend(to_real(&grid, c));
        }
        return Ok(GridField::from_parts(grid, 2, data));
    }
    Ok(apply_slots(&grid, &[(Slot::Cross, a.as_array(), &hat)]))
}

/// `((A×∇)×∇)ψ = (A·∇)∇ψ − AΔψ` on a 3D grid.
pub fn cross_grad_curl(a: FrameVector, psi: &GridField) -> Result<GridField> {
    if !psi.is_scalar() || psi.grid().dim() != 3 {
        return Err(Error::Shape("cross_grad_curl expects a 3D scalar potential".into()));
    }
    let grid = *psi.grid();
    let hat = to_hat(&grid, psi.data());
    Ok(apply_slots(&grid, &[(Slot::CrossCurl, a.as_array(), &hat)]))
}

/// Velocity of a grid representation.
pub fn synthesize(rep: &SymplecticRep) -> Result<GridField> {
    let (phi, psi) = rep.grid_potentials()?;
    let grid = *phi.grid();
    if rep.dim == 2 {
        return cross_grad(rep.a, phi);
    }
    let (sa, sb) = rep.kind.slots();
    let ph = to_hat(&grid, phi.data());
    let ps = to_hat(&grid, psi.data());
    Ok(apply_slots(
        &grid,
        &[(sa, rep.a.as_array(), &ph), (sb, rep.b.as_array(), &ps)],
    ))
}

/// Vorticity computed from the potentials. In 2D this is the scalar `Δφ`.
pub fn vorticity_of_rep(rep: &SymplecticRep) -> Result<GridField> {
    let (phi, psi) = rep.grid_potentials()?;
    let grid = *phi.grid();
    if rep.dim == 2 {
        let hat = to_hat(&grid, phi.data());
        let lap: Vec<Complex64> = hat
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let xi = grid.xi(i);
                -dot(xi, xi) * z
            })
            .collect();
        return Ok(GridField::from_parts(grid, 1, to_real(&grid, lap)));
    }
    let ph = to_hat(&grid, phi.data());
    let ps = to_hat(&grid, psi.data());
    let len = grid.len();
    let (sa, sb) = rep.kind.slots();
    let mut out = vec![vec![ZERO; len]; 3];
    for i in 0..len {
        let xi = grid.xi(i);
        let k2 = dot(xi, xi);
        for (slot, a, hat) in [(sa, rep.a.as_array(), &ph), (sb, rep.b.as_array(), &ps)] {
            // curl(C_A f) = −W_A f,  curl(W_A f) = C_A Δf
            let (sym, factor) = match slot {
                Slot::Cross => (w_symbol(a, xi), -1.0),
                Slot::CrossCurl => (c_symbol(a, xi), -k2),
            };
            for c in 0..3 {
                out[c][i] += sym[c] * factor * hat[i];
            }
        }
    }
    let mut data = Vec::with_capacity(3 * len);
    for c in out {
        data.extend(to_real(&grid, c));
    }
    Ok(GridField::from_parts(grid, 3, data))
}

/// Share of right-hand-side energy discarded on near-singular modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KilledFraction {
    pub phi: f64,
    pub psi: f64,
}

impl KilledFraction {
    pub fn max(&self) -> f64 {
        self.phi.max(self.psi)
    }

    /// More than half of the data fell into the symbol's null set.
    pub fn ill_posed(&self) -> bool {
        self.max() > 0.5
    }
}

/// Potentials recovered from a velocity field.
#[derive(Debug, Clone)]
pub struct Recovery {
    pub phi: GridField,
    pub psi: GridField,
    pub killed: KilledFraction,
    killed_phi: Vec<bool>,
    killed_psi: Vec<bool>,
}

impl Recovery {
    /// Per-mode flags (FFT order) of discarded `φ` modes.
    pub fn killed_modes_phi(&self) -> &[bool] {
        &self.killed_phi
    }

    pub fn killed_modes_psi(&self) -> &[bool] {
        &self.killed_psi
    }
}

struct Division {
    hat: Vec<Complex64>,
    killed: Vec<bool>,
    fraction: f64,
}

fn divide(
    grid: &Grid,
    rhs: &[Vec<Complex64>],
    symbols: impl Fn([f64; 3]) -> ([Complex64; 3], [Complex64; 3]),
) -> Division {
    let len = grid.len();
    let mut hat = vec![ZERO; len];
    let mut killed = vec![false; len];
    let (mut total, mut lost) = (0.0, 0.0);
    for i in 0..len {
        let xi = grid.xi(i);
        let (t, s) = symbols(xi);
        let v = [rhs[0][i], rhs[1][i], rhs[2][i]];
        let num = cdot(&t, &v);
        let den = cdot(&t, &s);
        // the whole right-hand side counts: on degenerate modes `num` vanishes
        // even though `v` does not
        let e = cnorm(&v).powi(2);
        total += e;
        if i == 0 || den.norm() <= KILL_EPS * cnorm(&t) * cnorm(&s) {
            killed[i] = true;
            lost += e;
        } else {
            hat[i] = num / den;
        }
    }
    let fraction = if total > 0.0 { lost / total } else { 0.0 };
    Division { hat, killed, fraction }
}

/// Solves the mode-wise linear relations for `(φ, ψ)`. Modes whose
/// denominator is below `KILL_EPS` times the symbol scale, and the mean, are
/// set to zero; their share is reported in [`KilledFraction`]. `omega` is
/// computed from `u` when not supplied.
pub fn recover_potentials(
    u: &GridField,
    omega: Option<&GridField>,
    kind: RepKind,
    a: FrameVector,
    b: FrameVector,
) -> Result<Recovery> {
    let grid = *u.grid();
    if u.components() != grid.dim() {
        return Err(Error::Shape("recovery expects a velocity field".into()));
    }
    if grid.dim() == 2 {
        return recover_planar(u, omega);
    }
    check_frames(kind, a, b)?;
    let u_hat: Vec<Vec<Complex64>> = (0..3).map(|c| to_hat(&grid, u.component(c))).collect();
    let w_hat: Vec<Vec<Complex64>> = match omega {
        Some(w) => {
            if w.grid() != &grid || w.components() != 3 {
                return Err(Error::Shape("vorticity does not match the velocity grid".into()));
            }
            (0..3).map(|c| to_hat(&grid, w.component(c))).collect()
        }
        None => curl_hat(&grid, &u_hat),
    };
    let (av, bv) = (a.as_array(), b.as_array());
    let neg = |v: [Complex64; 3]| v.map(|z| -z);
    let (dphi, dpsi) = match kind {
        RepKind::Rep11 => (
            divide(&grid, &w_hat, |xi| (c_symbol(bv, xi), neg(w_symbol(av, xi)))),
            divide(&grid, &w_hat, |xi| (c_symbol(av, xi), neg(w_symbol(bv, xi)))),
        ),
        RepKind::Rep12 => (
            divide(&grid, &u_hat, |xi| (c_symbol(bv, xi), c_symbol(av, xi))),
            divide(&grid, &w_hat, |xi| {
                let k2 = dot(xi, xi);
                (c_symbol(av, xi), c_symbol(bv, xi).map(|z| -k2 * z))
            }),
        ),
        RepKind::Rep22 => (
            divide(&grid, &u_hat, |xi| (c_symbol(bv, xi), w_symbol(av, xi))),
            divide(&grid, &u_hat, |xi| (c_symbol(av, xi), w_symbol(bv, xi))),
        ),
    };
    Ok(Recovery {
        phi: GridField::from_parts(grid, 1, to_real(&grid, dphi.hat)),
        psi: GridField::from_parts(grid, 1, to_real(&grid, dpsi.hat)),
        killed: KilledFraction {
            phi: dphi.fraction,
            psi: dpsi.fraction,
        },
        killed_phi: dphi.killed,
        killed_psi: dpsi.killed,
    })
}

fn recover_planar(u: &GridField, omega: Option<&GridField>) -> Result<Recovery> {
    let grid = *u.grid();
    let w_hat = match omega {
        Some(w) if w.is_scalar() && w.grid() == &grid => to_hat(&grid, w.data()),
        Some(_) => return Err(Error::Shape("planar vorticity must be a scalar on the same grid".into())),
        None => {
            let uh: Vec<Vec<Complex64>> = (0..2).map(|c| to_hat(&grid, u.component(c))).collect();
            curl_hat(&grid, &uh).remove(0)
        }
    };
    let len = grid.len();
    let mut hat = vec![ZERO; len];
    let mut killed = vec![false; len];
    let (mut total, mut lost) = (0.0, 0.0);
    for i in 0..len {
        let xi = grid.xi(i);
        let k2 = dot(xi, xi);
        let e = w_hat[i].norm_sqr();
        total += e;
        if k2 == 0.0 {
            killed[i] = true;
            lost += e;
        } else {
            hat[i] = -w_hat[i] / k2;
        }
    }
    Ok(Recovery {
        phi: GridField::from_parts(grid, 1, to_real(&grid, hat)),
        psi: GridField::zeros(grid, 1),
        killed: KilledFraction {
            phi: if total > 0.0 { lost / total } else { 0.0 },
            psi: 0.0,
        },
        killed_phi: killed,
        killed_psi: vec![true; len],
    })
}
