//! Serializable run configurations shared by the command-line tool and the
//! examples.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    make_beltrami, make_heat_2d, make_poly_family, make_radial_pair12, make_static_euler_2d, ExactSolution, Family,
    PolyCoeffs, PolyKind, StaticKind, TimeDependence,
};
use crate::error::{Error, Result};
use crate::evolve::{FrameRegistration, SolverConfig};
use crate::frames::{synthesize, FrameVector, Potential, RepKind, SymplecticRep};
use crate::grid::{Grid, GridField};
use crate::radial::{BumpTemplate, RadialProfile};
use crate::symmetry::{Cutoff, Frames};
use crate::verify::{
    random_shell_points, residual_beltrami, residual_divergence, residual_ns, residual_static_euler, FieldInput,
    NsInput, ResidualReport,
};

/// Reads a JSON file; any parse failure is a configuration error.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn one() -> f64 {
    1.0
}

fn default_nu() -> f64 {
    0.01
}

fn default_times() -> Vec<f64> {
    vec![0.0, 0.5]
}

fn default_points() -> usize {
    1000
}

fn default_seed() -> u64 {
    7
}

fn default_tol() -> f64 {
    1e-8
}

fn default_a() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

fn default_b() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

/// Parameters of a pointwise verification of one catalog family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub family: Family,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub coeffs: PolyCoeffs,
    /// Bump radius.
    #[serde(default = "one")]
    pub ra: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub template: BumpTemplate,
    /// Annulus of the periodic planar family.
    #[serde(default)]
    pub annulus: Option<[f64; 2]>,
    /// Potentials for `heat2d` (`phi`) and `radialpair12` (`phi`, `psi`).
    #[serde(default)]
    pub phi: Option<RadialProfile>,
    #[serde(default)]
    pub psi: Option<RadialProfile>,
    #[serde(default = "default_a")]
    pub frame_a: [f64; 3],
    #[serde(default = "default_b")]
    pub frame_b: [f64; 3],
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default = "default_times")]
    pub times: Vec<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Sampling shell; chosen from the family when absent.
    #[serde(default)]
    pub r_min: Option<f64>,
    #[serde(default)]
    pub r_max: Option<f64>,
}

impl VerifyConfig {
    pub fn new(family: Family) -> Self {
        VerifyConfig {
            family,
            lambda: 1.0,
            alpha: 1.0,
            beta: 0.0,
            coeffs: PolyCoeffs::default(),
            ra: 1.0,
            amplitude: 1.0,
            template: BumpTemplate::default(),
            annulus: None,
            phi: None,
            psi: None,
            frame_a: default_a(),
            frame_b: default_b(),
            nu: default_nu(),
            times: default_times(),
            points: default_points(),
            seed: default_seed(),
            tol: default_tol(),
            r_min: None,
            r_max: None,
        }
    }

    pub fn build_solution(&self) -> Result<ExactSolution> {
        let a = FrameVector::new(self.frame_a)?;
        let b = FrameVector::new(self.frame_b)?;
        match self.family {
            Family::Beltrami3D => make_beltrami(self.lambda, self.alpha, self.beta, a, self.nu),
            Family::Poly12Perp => make_poly_family(PolyKind::Poly12Perp, self.coeffs, a, b, self.nu),
            Family::Poly11 => make_poly_family(PolyKind::Poly11, self.coeffs, a, b, self.nu),
            Family::Poly22 => make_poly_family(PolyKind::Poly22, self.coeffs, a, b, self.nu),
            Family::StaticEuler2DBump => make_static_euler_2d(StaticKind::Bump {
                amplitude: self.amplitude,
                ra: self.ra,
                template: self.template,
            }),
            Family::StaticEuler2DPeriodic => {
                let [r_min, r_max] = self.annulus.unwrap_or([1.0, 5.0]);
                make_static_euler_2d(StaticKind::Periodic { j: self.lambda, alpha: self.alpha, beta: self.beta, r_min, r_max })
            }
            Family::Heat2DRadial => make_heat_2d(self.phi.clone().unwrap_or(RadialProfile::gaussian(1.0, 1.0)), self.nu),
            Family::RadialPair12 => {
                let lam = self.lambda;
                let phi = self.phi.clone().unwrap_or(RadialProfile::sinc(lam, lam * self.alpha, lam * self.beta));
                let psi = self.psi.clone().unwrap_or(RadialProfile::sinc(lam, self.alpha, self.beta));
                let (lo, hi) = self.shell_default(&phi.scale().max(psi.scale()));
                make_radial_pair12(phi, psi, a, self.nu, lo, hi)
            }
        }
    }

    fn shell_default(&self, scale: &f64) -> (f64, f64) {
        let lo = self.r_min.unwrap_or(0.1 * scale.min(1.0));
        let hi = self.r_max.unwrap_or(match self.family {
            Family::Beltrami3D | Family::RadialPair12 => 10.0,
            _ => 2.0 * scale,
        });
        (lo, hi)
    }

    /// Sampling shell clipped to the region where the solution is defined.
    pub fn sampling_shell(&self, sol: &ExactSolution) -> (f64, f64) {
        let scale = match self.family {
            Family::StaticEuler2DBump => self.ra,
            _ => 1.0,
        };
        let (lo, hi) = self.shell_default(&scale);
        let reg = sol.region();
        // nested stencils reach up to 8 steps from a sample point
        let margin = 10.0 * sol.stencil_step();
        let inner = if reg.r_min > 0.0 { reg.r_min + margin } else { 0.0 };
        (lo.max(inner), hi.min(reg.r_max - margin))
    }
}

/// Runs every applicable pointwise check of a catalog family.
pub fn run_verify(cfg: &VerifyConfig) -> Result<Vec<ResidualReport>> {
    if cfg.points == 0 {
        return Err(Error::Config("at least one sample point is needed".into()));
    }
    let sol = cfg.build_solution()?;
    let (lo, hi) = cfg.sampling_shell(&sol);
    if !(hi > lo) {
        return Err(Error::Config(format!("empty sampling shell [{lo}, {hi}]")));
    }
    let pts = random_shell_points(cfg.points, lo, hi, sol.dim(), cfg.seed);
    let mut reports = Vec::new();
    let start = sol.at(0.0)?;
    reports.push(residual_divergence(FieldInput::Points { sampler: &start, points: &pts }, cfg.tol)?);
    if sol.family() == Family::Beltrami3D {
        for &t in &cfg.times {
            let st = sol.at(t)?;
            let mut r = residual_beltrami(&st, &pts, cfg.lambda, cfg.tol)?;
            r.meta["t"] = serde_json::json!(t);
            reports.push(r);
        }
    }
    if sol.time_dependence() == TimeDependence::Static {
        reports.push(residual_static_euler(FieldInput::Points { sampler: &start, points: &pts }, cfg.tol)?);
    }
    for &t in &cfg.times {
        let mut r = residual_ns(NsInput::Exact { solution: &sol, t, points: &pts }, sol.nu(), cfg.tol)?;
        r.meta["t"] = serde_json::json!(t);
        reports.push(r);
    }
    Ok(reports)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolveKind {
    Hm2d,
    Ns3d,
    Heat,
}

impl EvolveKind {
    pub fn dim(self) -> Option<usize> {
        match self {
            EvolveKind::Hm2d => Some(2),
            EvolveKind::Ns3d => Some(3),
            EvolveKind::Heat => None,
        }
    }
}

fn true_() -> bool {
    true
}

/// Initial data of a solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialCondition {
    /// A radial scalar; its grid mean is removed unless told otherwise.
    Radial {
        profile: RadialProfile,
        #[serde(default = "true_")]
        subtract_mean: bool,
    },
    /// `(a sin kz + c cos ky, b sin kx + a cos kz, c sin ky + b cos kx)`
    Abc {
        a: f64,
        b: f64,
        c: f64,
        #[serde(default = "one")]
        k: f64,
    },
    /// Velocity synthesized from radial potentials.
    Rep {
        rep: RepKind,
        frames: Frames,
        phi: RadialProfile,
        psi: RadialProfile,
        #[serde(default)]
        cutoff: Option<Cutoff>,
    },
    Zero,
    /// An SFNS1 field file.
    File { path: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolveGrid {
    pub n: usize,
    pub length: f64,
    /// Needed only for diffusion runs; defaults to 3.
    #[serde(default)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveConfig {
    pub grid: EvolveGrid,
    pub solver: SolverConfig,
    pub initial: InitialCondition,
    /// Frames whose potentials are recovered at every 3D snapshot.
    #[serde(default)]
    pub frames: Option<FrameRegistration>,
}

impl EvolveConfig {
    pub fn grid_for(&self, kind: EvolveKind) -> Result<Grid> {
        let dim = match (kind.dim(), self.grid.dim) {
            (Some(d), Some(e)) if d != e => {
                return Err(Error::Config(format!("{kind:?} runs are {d}D, the config asks for {e}D")))
            }
            (Some(d), _) => d,
            (None, Some(e)) => e,
            (None, None) => 3,
        };
        Grid::new(dim, self.grid.n, self.grid.length)
    }

    /// Builds the initial field. `base` resolves relative file paths.
    pub fn initial_field(&self, kind: EvolveKind, base: &Path) -> Result<GridField> {
        let grid = self.grid_for(kind)?;
        let want_vector = kind == EvolveKind::Ns3d;
        let f = match &self.initial {
            InitialCondition::Zero => GridField::zeros(grid, if want_vector { 3 } else { 1 }),
            InitialCondition::Radial { profile, subtract_mean } => {
                let f = GridField::try_scalar_from_fn(grid, |x| {
                    profile.value((x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt())
                })?;
                if *subtract_mean {
                    let m = f.mean(0);
                    GridField::new(grid, 1, f.data().iter().map(|v| v - m).collect())?
                } else {
                    f
                }
            }
            InitialCondition::Abc { a, b, c, k } => {
                if grid.dim() != 3 {
                    return Err(Error::Config("ABC flows are three-dimensional".into()));
                }
                GridField::vector_from_fn(grid, |x| {
                    [
                        a * (k * x[2]).sin() + c * (k * x[1]).cos(),
                        b * (k * x[0]).sin() + a * (k * x[2]).cos(),
                        c * (k * x[1]).sin() + b * (k * x[0]).cos(),
                    ]
                })
            }
            InitialCondition::Rep { rep, frames, phi, psi, cutoff } => {
                if grid.dim() != 3 {
                    return Err(Error::Config("synthesized velocities are three-dimensional".into()));
                }
                let sample = |p: &RadialProfile| {
                    GridField::try_scalar_from_fn(grid, |x| {
                        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                        let chi = cutoff.map_or(1.0, |c| c.value(r, grid.length()));
                        Ok(chi * p.value(r)?)
                    })
                };
                let r = SymplecticRep::new(*rep, frames.a, frames.b, Potential::Grid(sample(phi)?), Potential::Grid(sample(psi)?))?;
                synthesize(&r)?
            }
            InitialCondition::File { path } => {
                let p = Path::new(path);
                let p = if p.is_relative() { base.join(p) } else { p.to_path_buf() };
                let f = crate::grid::io::load(&p)?;
                if f.grid() != &grid {
                    return Err(Error::Config(format!("{} does not match the configured grid", p.display())));
                }
                f
            }
        };
        match kind {
            EvolveKind::Hm2d if !f.is_scalar() => Err(Error::Config("hm2d needs a scalar potential".into())),
            EvolveKind::Ns3d if f.components() != 3 => Err(Error::Config("ns3d needs a velocity".into())),
            _ => Ok(f),
        }
    }
}
