//! Pseudo-spectral time integration on periodic grids: the planar
//! Hasegawa–Mima (vorticity) equation, 3D Navier–Stokes and pure diffusion.
//!
//! Viscosity is integrated exactly with an integrating factor; the nonlinear
//! terms use classical RK4 (Lawson form).

use std::fs;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::frames::{recover_potentials, FrameVector, RepKind};
use crate::grid::io::save;
use crate::grid::ops::{bracket_hat, curl_hat, d_hat, dealias_hat, inv_lap_hat, lap_hat, leray_hat, to_hat, to_real};
use crate::grid::{Grid, GridField};
use crate::verify::EnergyReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stepper {
    #[default]
    Rk4IntegratingFactor,
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

fn default_cfl() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub nu: f64,
    pub dt: f64,
    /// Final time.
    #[serde(rename = "t_final")]
    pub t_final: f64,
    #[serde(default = "default_true")]
    pub dealias: bool,
    #[serde(default)]
    pub stepper: Stepper,
    #[serde(default = "default_one")]
    pub snapshot_every: usize,
    /// Abort when `dt·max|u| / h` exceeds this.
    #[serde(default = "default_cfl")]
    pub cfl_limit: f64,
}

impl SolverConfig {
    pub fn new(nu: f64, dt: f64, t_final: f64) -> Self {
        SolverConfig {
            nu,
            dt,
            t_final,
            dealias: true,
            stepper: Stepper::default(),
            snapshot_every: 1,
            cfl_limit: default_cfl(),
        }
    }

    pub fn with_snapshot_every(mut self, k: usize) -> Self {
        self.snapshot_every = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(Error::Config(format!("nu must be non-negative, got {}", self.nu)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::Config(format!("t_final must be non-negative, got {}", self.t_final)));
        }
        if self.snapshot_every == 0 {
            return Err(Error::Config("snapshot_every must be at least 1".into()));
        }
        if !(self.cfl_limit > 0.0) {
            return Err(Error::Config("cfl_limit must be positive".into()));
        }
        Ok(())
    }

    /// Step sizes covering `[0, t_final]`; the last one may be shorter.
    fn steps(&self) -> Vec<f64> {
        let n = (self.t_final / self.dt - 1e-9).ceil().max(0.0) as usize;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.t_final - self.dt * (n - 1) as f64
                } else {
                    self.dt
                }
            })
            .collect()
    }
}

/// Fields stored at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    /// Named fields, e.g. `u`, `phi`, `q`, `psi`.
    pub fields: Vec<(String, GridField)>,
}

impl Snapshot {
    pub fn field(&self, name: &str) -> Option<&GridField> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    pub t: f64,
    /// `‖u‖²`
    pub energy: f64,
    /// `‖∇u‖²`
    pub gradient_energy: f64,
    /// `dt·max|u| / h` of the step that led here (0 at the start).
    pub cfl: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CflAbort {
    pub t: f64,
    pub dt: f64,
    pub limit: f64,
}

/// Result of a run. An aborted run keeps everything up to the last stable step.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub kind: String,
    pub snapshots: Vec<Snapshot>,
    pub config: SolverConfig,
    pub wall_time: f64,
    pub diagnostics: Vec<StepDiagnostics>,
    pub abort: Option<CflAbort>,
    /// `‖u0 − P u0‖∞` of the entry projection (3D runs).
    pub projection_delta: f64,
}

impl RunRecord {
    /// Fails with [`Error::Cfl`] if the run was aborted.
    pub fn check(&self) -> Result<()> {
        match self.abort {
            Some(a) => Err(Error::Cfl { t: a.t, dt: a.dt, limit: a.limit }),
            None => Ok(()),
        }
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    /// All snapshots of the field `name`.
    pub fn series(&self, name: &str) -> Vec<GridField> {
        self.snapshots.iter().filter_map(|s| s.field(name).cloned()).collect()
    }

    /// Energy balance from the per-step diagnostics.
    pub fn energy_report(&self) -> EnergyReport {
        let t: Vec<f64> = self.diagnostics.iter().map(|d| d.t).collect();
        let e: Vec<f64> = self.diagnostics.iter().map(|d| d.energy).collect();
        let g: Vec<f64> = self.diagnostics.iter().map(|d| d.gradient_energy).collect();
        EnergyReport::from_series(&t, &e, &g, self.config.nu)
    }

    /// Writes `snap_XXXXX_<name>.sfns` files, `index.json` and `series.csv`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut entries = Vec::new();
        for (i, s) in self.snapshots.iter().enumerate() {
            let mut files = serde_json::Map::new();
            for (name, f) in &s.fields {
                let file = format!("snap_{i:05}_{name}.sfns");
                save(&dir.join(&file), f)?;
                files.insert(name.clone(), json!(file));
            }
            entries.push(json!({"t": s.t, "files": files}));
        }
        let index = json!({
            "kind": self.kind,
            "config": self.config,
            "wall_time": self.wall_time,
            "abort": self.abort,
            "projection_delta": self.projection_delta,
            "snapshots": entries,
        });
        fs::write(dir.join("index.json"), serde_json::to_string_pretty(&index)?)?;
        let report = self.energy_report();
        let mut csv = String::from("t,E,D,imbalance,cfl\n");
        for (i, d) in self.diagnostics.iter().enumerate() {
            csv.push_str(&format!(
                "{},{},{},{},{}\n",
                d.t, d.energy, report.dissipation[i], report.imbalance[i], d.cfl
            ));
        }
        fs::write(dir.join("series.csv"), csv)?;
        Ok(())
    }
}

type Hat = Vec<Complex64>;

fn axpy(y: &[Complex64], a: f64, x: &[Complex64]) -> Hat {
    y.iter().zip(x).map(|(p, q)| p + a * q).collect()
}

fn mul(e: &[f64], x: &[Complex64]) -> Hat {
    e.iter().zip(x).map(|(f, z)| f * z).collect()
}

/// One Lawson RK4 step of `∂t v = L v + N(v)` with diagonal `L`, on a list of
/// spectral components.
fn if_rk4(v: &[Hat], dt: f64, decay: &[f64], n: &impl Fn(&[Hat]) -> Vec<Hat>) -> Vec<Hat> {
    let e: Vec<f64> = decay.iter().map(|l| (-l * dt).exp()).collect();
    let e2: Vec<f64> = decay.iter().map(|l| (-l * dt * 0.5).exp()).collect();
    let map = |f: &dyn Fn(usize) -> Hat| (0..v.len()).map(f).collect::<Vec<Hat>>();
    let k1 = n(v);
    let v2 = map(&|c| mul(&e2, &axpy(&v[c], 0.5 * dt, &k1[c])));
    let k2 = n(&v2);
    let v3 = map(&|c| axpy(&mul(&e2, &v[c]), 0.5 * dt, &k2[c]));
    let k3 = n(&v3);
    let v4 = map(&|c| axpy(&mul(&e, &v[c]), dt, &mul(&e2, &k3[c])));
    let k4 = n(&v4);
    map(&|c| {
        let mut out = mul(&e, &v[c]);
        let a = mul(&e, &k1[c]);
        let b = mul(&e2, &axpy(&k2[c], 1.0, &k3[c]));
        for i in 0..out.len() {
            out[i] += dt / 6.0 * (a[i] + 2.0 * b[i] + k4[c][i]);
        }
        out
    })
}

fn viscous_rates(grid: &Grid, nu: f64) -> Vec<f64> {
    (0..grid.len()).map(|i| nu * grid.xi_sq(i)).collect()
}

/// `Σ|ξ|^(2p) |f̂|²` scaled to a continuous L² norm squared.
fn spectral_norm_sq(grid: &Grid, hat: &[Complex64], p: i32) -> f64 {
    let mut acc = 0.0;
    for (i, z) in hat.iter().enumerate() {
        let xi = grid.xi(i);
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        acc += k2.powi(p) * z.norm_sqr();
    }
    acc * grid.cell_volume() / grid.len() as f64
}

fn max_speed(vel: &[Vec<f64>]) -> f64 {
    let n = vel[0].len();
    (0..n)
        .map(|i| vel.iter().map(|c| c[i] * c[i]).sum::<f64>())
        .fold(0.0f64, f64::max)
        .sqrt()
}

fn field_from_hat(grid: &Grid, comps: &[Hat]) -> GridField {
    let mut data = Vec::with_capacity(comps.len() * grid.len());
    for c in comps {
        data.extend(to_real(grid, c.clone()));
    }
    GridField::from_parts(*grid, comps.len(), data)
}

struct Driver<'a> {
    cfg: &'a SolverConfig,
    grid: Grid,
    start: Instant,
    diagnostics: Vec<StepDiagnostics>,
    snapshots: Vec<Snapshot>,
}

impl Driver<'_> {
    /// Runs the loop; `speed` returns the current max speed, `step` advances,
    /// `diag` returns `(energy, gradient energy)`, `snap` builds snapshot fields.
    fn run<S>(
        mut self,
        kind: &str,
        mut state: S,
        speed: impl Fn(&S) -> f64,
        step: impl Fn(&S, f64) -> S,
        diag: impl Fn(&S) -> (f64, f64),
        snap: impl Fn(&S) -> Result<Vec<(String, GridField)>>,
        projection_delta: f64,
    ) -> Result<RunRecord> {
        let h = self.grid.spacing();
        let (e, g) = diag(&state);
        self.diagnostics.push(StepDiagnostics { t: 0.0, energy: e, gradient_energy: g, cfl: 0.0 });
        self.snapshots.push(Snapshot { t: 0.0, fields: snap(&state)? });
        let steps = self.cfg.steps();
        let mut t = 0.0;
        let mut abort = None;
        for (i, &dt) in steps.iter().enumerate() {
            let cfl = dt * speed(&state) / h;
            if cfl > self.cfg.cfl_limit {
                log::warn!("CFL abort at t = {t}: {cfl:.3} > {}", self.cfg.cfl_limit);
                abort = Some(CflAbort { t, dt, limit: self.cfg.cfl_limit * h / speed(&state) });
                break;
            }
            state = step(&state, dt);
            t = if i + 1 == steps.len() { self.cfg.t_final } else { (i + 1) as f64 * self.cfg.dt };
            let (e, g) = diag(&state);
            if !e.is_finite() {
                return Err(Error::Config(format!("solution blew up at t = {t}")));
            }
            self.diagnostics.push(StepDiagnostics { t, energy: e, gradient_energy: g, cfl });
            if (i + 1) % self.cfg.snapshot_every == 0 || i + 1 == steps.len() {
                self.snapshots.push(Snapshot { t, fields: snap(&state)? });
            }
        }
        log::info!("{kind}: {} steps in {:.2}s", self.diagnostics.len() - 1, self.start.elapsed().as_secs_f64());
        Ok(RunRecord {
            kind: kind.to_string(),
            snapshots: self.snapshots,
            config: self.cfg.clone(),
            wall_time: self.start.elapsed().as_secs_f64(),
            diagnostics: self.diagnostics,
            abort,
            projection_delta,
        })
    }
}

fn driver(cfg: &SolverConfig, grid: Grid) -> Result<Driver<'_>> {
    cfg.validate()?;
    Ok(Driver { cfg, grid, start: Instant::now(), diagnostics: Vec::new(), snapshots: Vec::new() })
}

fn maybe_dealias(grid: &Grid, hat: &mut [Complex64], on: bool) {
    if on {
        dealias_hat(grid, hat);
    }
}

/// Planar `∂t q = νΔq − {φ, q}` with `q = Δφ`. Snapshots hold `phi` and `q`.
pub fn evolve_hm2d(phi0: &GridField, cfg: &SolverConfig) -> Result<RunRecord> {
    let grid = *phi0.grid();
    if grid.dim() != 2 || !phi0.is_scalar() {
        return Err(Error::Shape("the Hasegawa–Mima solver needs a 2D scalar".into()));
    }
    let mean = phi0.mean(0);
    let limit = 1e-10 * phi0.linf();
    if mean.abs() > limit && mean != 0.0 {
        return Err(Error::NonZeroMean { mean, limit });
    }
    let d = driver(cfg, grid)?;
    let decay = viscous_rates(&grid, cfg.nu);
    let dealias = cfg.dealias;
    let q0 = lap_hat(&grid, &to_hat(&grid, phi0.data()));
    let nonlinear = |v: &[Hat]| -> Vec<Hat> {
        let phi = inv_lap_hat(&grid, &v[0]);
        let b = if dealias {
            bracket_hat(&grid, &phi, &v[0])
        } else {
            let f1 = to_real(&grid, d_hat(&grid, &phi, 0));
            let f2 = to_real(&grid, d_hat(&grid, &phi, 1));
            let g1 = to_real(&grid, d_hat(&grid, &v[0], 0));
            let g2 = to_real(&grid, d_hat(&grid, &v[0], 1));
            to_hat(&grid, &(0..grid.len()).map(|i| f1[i] * g2[i] - f2[i] * g1[i]).collect::<Vec<_>>())
        };
        vec![b.into_iter().map(|z| -z).collect()]
    };
    let speed = |v: &Vec<Hat>| {
        let phi = inv_lap_hat(&grid, &v[0]);
        max_speed(&[to_real(&grid, d_hat(&grid, &phi, 0)), to_real(&grid, d_hat(&grid, &phi, 1))])
    };
    let diag = |v: &Vec<Hat>| {
        let phi = inv_lap_hat(&grid, &v[0]);
        (spectral_norm_sq(&grid, &phi, 1), spectral_norm_sq(&grid, &v[0], 0))
    };
    let snap = |v: &Vec<Hat>| {
        let phi = inv_lap_hat(&grid, &v[0]);
        Ok(vec![
            ("phi".to_string(), field_from_hat(&grid, &[phi])),
            ("q".to_string(), field_from_hat(&grid, &v[..1])),
        ])
    };
    d.run(
        "hm2d",
        vec![q0],
        speed,
        |v, dt| if_rk4(v, dt, &decay, &nonlinear),
        diag,
        snap,
        0.0,
    )
}

/// Frames whose potentials are recovered at every snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameRegistration {
    pub kind: RepKind,
    pub a: FrameVector,
    pub b: FrameVector,
}

/// 3D Navier–Stokes in rotational form, `∂t u = νΔu + P(u×ω)`.
pub fn evolve_ns3d(u0: &GridField, cfg: &SolverConfig) -> Result<RunRecord> {
    evolve_ns3d_registered(u0, cfg, None)
}

/// As [`evolve_ns3d`]; with a registration, snapshots also hold the
/// recovered `phi` and `psi`.
pub fn evolve_ns3d_registered(u0: &GridField, cfg: &SolverConfig, frames: Option<FrameRegistration>) -> Result<RunRecord> {
    let grid = *u0.grid();
    if grid.dim() != 3 || u0.components() != 3 {
        return Err(Error::Shape("the 3D solver needs a 3D vector field".into()));
    }
    let d = driver(cfg, grid)?;
    let mut v0: Vec<Hat> = (0..3).map(|c| to_hat(&grid, u0.component(c))).collect();
    leray_hat(&grid, &mut v0);
    let projected = field_from_hat(&grid, &v0);
    let projection_delta = u0.sub(&projected)?.linf();
    if projection_delta > 1e-10 * u0.linf().max(f64::MIN_POSITIVE) {
        log::info!("initial velocity projected, change {projection_delta:e}");
    }
    let decay = viscous_rates(&grid, cfg.nu);
    let dealias = cfg.dealias;
    let nonlinear = |v: &[Hat]| -> Vec<Hat> {
        let vd: Vec<Hat> = v
            .iter()
            .map(|c| {
                let mut c = c.clone();
                maybe_dealias(&grid, &mut c, dealias);
                c
            })
            .collect();
        let w: Vec<Vec<f64>> = curl_hat(&grid, &vd).into_iter().map(|c| to_real(&grid, c)).collect();
        let u: Vec<Vec<f64>> = vd.into_iter().map(|c| to_real(&grid, c)).collect();
        let len = grid.len();
        let mut out: Vec<Hat> = (0..3)
            .map(|c| {
                let (a, b) = ((c + 1) % 3, (c + 2) % 3);
                let prod: Vec<f64> = (0..len).map(|i| u[a][i] * w[b][i] - u[b][i] * w[a][i]).collect();
                let mut h = to_hat(&grid, &prod);
                maybe_dealias(&grid, &mut h, dealias);
                h
            })
            .collect();
        leray_hat(&grid, &mut out);
        out
    };
    let speed = |v: &Vec<Hat>| max_speed(&v.iter().map(|c| to_real(&grid, c.clone())).collect::<Vec<_>>());
    let diag = |v: &Vec<Hat>| {
        let e: f64 = v.iter().map(|c| spectral_norm_sq(&grid, c, 0)).sum();
        let g: f64 = v.iter().map(|c| spectral_norm_sq(&grid, c, 1)).sum();
        (e, g)
    };
    let snap = |v: &Vec<Hat>| {
        let u = field_from_hat(&grid, v);
        let mut fields = vec![("u".to_string(), u.clone())];
        if let Some(f) = frames {
            let rec = recover_potentials(&u, None, f.kind, f.a, f.b)?;
            fields.push(("phi".to_string(), rec.phi));
            fields.push(("psi".to_string(), rec.psi));
        }
        Ok(fields)
    };
    d.run(
        "ns3d",
        v0,
        speed,
        |v, dt| if_rk4(v, dt, &decay, &nonlinear),
        diag,
        snap,
        projection_delta,
    )
}

/// `e^{τΔ} f` for every component (`τ = νt`).
pub fn evolve_heat(f: &GridField, tau: f64) -> Result<GridField> {
    if !(tau >= 0.0) {
        return Err(Error::Config(format!("diffusion time must be non-negative, got {tau}")));
    }
    let grid = *f.grid();
    let comps: Vec<Hat> = (0..f.components())
        .map(|c| {
            to_hat(&grid, f.component(c))
                .into_iter()
                .enumerate()
                .map(|(i, z)| z * (-tau * grid.xi_sq(i)).exp())
                .collect()
        })
        .collect();
    Ok(field_from_hat(&grid, &comps))
}

/// Pure diffusion run with snapshots `f`; diagnostics treat `f` as the field.
pub fn evolve_heat_run(f0: &GridField, cfg: &SolverConfig) -> Result<RunRecord> {
    let grid = *f0.grid();
    let d = driver(cfg, grid)?;
    let hats: Vec<Hat> = (0..f0.components()).map(|c| to_hat(&grid, f0.component(c))).collect();
    let nu = cfg.nu;
    let diag = |v: &Vec<Hat>| {
        (
            v.iter().map(|c| spectral_norm_sq(&grid, c, 0)).sum(),
            v.iter().map(|c| spectral_norm_sq(&grid, c, 1)).sum(),
        )
    };
    d.run(
        "heat",
        hats,
        |_| 0.0,
        |v, dt| {
            v.iter()
                .map(|c| c.iter().enumerate().map(|(i, z)| z * (-nu * dt * grid.xi_sq(i)).exp()).collect())
                .collect()
        },
        diag,
        |v| Ok(vec![("f".to_string(), field_from_hat(&grid, v))]),
        0.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{diff, DiffOp};
    use std::f64::consts::PI;

    #[test]
    fn heat_multiplier_on_eigenmode() {
        let grid = Grid::new(2, 16, 2.0 * PI).unwrap();
        let f = GridField::scalar_from_fn(grid, |x| x[0].sin() + 3.0);
        let g = evolve_heat(&f, 0.4).unwrap();
        for i in 0..grid.len() {
            let x = grid.point(i);
            assert!((g.data()[i] - ((-0.4f64).exp() * x[0].sin() + 3.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn hm2d_single_mode_decays() {
        let grid = Grid::new(2, 32, 2.0 * PI).unwrap();
        let phi0 = GridField::scalar_from_fn(grid, |x| x[0].sin());
        let cfg = SolverConfig::new(0.1, 0.01, 0.5).with_snapshot_every(10);
        let run = evolve_hm2d(&phi0, &cfg).unwrap();
        run.check().unwrap();
        let last = run.snapshots.last().unwrap();
        assert!((last.t - 0.5).abs() < 1e-15);
        let phi = last.field("phi").unwrap();
        let f = (-0.05f64).exp();
        for i in 0..grid.len() {
            assert!((phi.data()[i] - f * grid.point(i)[0].sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn hm2d_rejects_mean() {
        let grid = Grid::new(2, 16, 2.0 * PI).unwrap();
        let phi0 = GridField::scalar_from_fn(grid, |x| 1.0 + x[0].sin());
        assert!(matches!(
            evolve_hm2d(&phi0, &SolverConfig::new(0.1, 0.01, 0.1)),
            Err(Error::NonZeroMean { .. })
        ));
    }

    #[test]
    fn zero_data_stays_zero() {
        let grid = Grid::new(3, 8, 2.0 * PI).unwrap();
        let run = evolve_ns3d(&GridField::zeros(grid, 3), &SolverConfig::new(0.1, 0.1, 0.3)).unwrap();
        assert_eq!(run.snapshots.len(), 4);
        assert!(run.snapshots.iter().all(|s| s.field("u").unwrap().linf() == 0.0));
    }

    #[test]
    fn abc_flow_decays_exactly() {
        let grid = Grid::new(3, 16, 2.0 * PI).unwrap();
        let u0 = GridField::vector_from_fn(grid, |x| {
            [x[2].sin() + x[1].cos(), x[0].sin() + x[2].cos(), x[1].sin() + x[0].cos()]
        });
        let nu = 0.1;
        let run = evolve_ns3d(&u0, &SolverConfig::new(nu, 0.01, 0.2).with_snapshot_every(20)).unwrap();
        let u = run.snapshots.last().unwrap().field("u").unwrap();
        let expect = u0.scale((-nu * 0.2f64).exp());
        assert!(u.sub(&expect).unwrap().linf() < 1e-10);
        assert!(diff(u, DiffOp::Divergence).unwrap().linf() < 1e-12);
        assert!(run.energy_report().max_relative_imbalance() < 1e-6);
    }

    #[test]
    fn cfl_violation_aborts_with_history() {
        let grid = Grid::new(3, 16, 2.0 * PI).unwrap();
        let u0 = GridField::vector_from_fn(grid, |x| [10.0 * x[1].sin(), 0.0, 0.0]);
        let run = evolve_ns3d(&u0, &SolverConfig::new(0.0, 0.1, 1.0)).unwrap();
        assert!(run.abort.is_some());
        assert_eq!(run.snapshots.len(), 1);
        assert!(matches!(run.check(), Err(Error::Cfl { .. })));
    }

    #[test]
    fn uneven_final_step() {
        let cfg = SolverConfig::new(0.0, 0.3, 1.0);
        let s = cfg.steps();
        assert_eq!(s.len(), 4);
        assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(SolverConfig::new(0.0, 0.1, 0.3).steps().len() == 3);
    }

    #[test]
    fn snapshots_round_trip_to_disk() {
        let grid = Grid::new(2, 8, 2.0 * PI).unwrap();
        let phi0 = GridField::scalar_from_fn(grid, |x| x[1].cos());
        let run = evolve_hm2d(&phi0, &SolverConfig::new(0.1, 0.05, 0.1)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        run.write(dir.path()).unwrap();
        let idx: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("index.json")).unwrap()).unwrap();
        assert_eq!(idx["snapshots"].as_array().unwrap().len(), 3);
        let f = crate::grid::io::load(&dir.path().join("snap_00002_phi.sfns")).unwrap();
        assert_eq!(&f, run.snapshots[2].field("phi").unwrap());
        assert!(std::fs::read_to_string(dir.path().join("series.csv")).unwrap().starts_with("t,E,D"));
    }
}
