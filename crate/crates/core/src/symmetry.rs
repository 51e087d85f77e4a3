//! Radial-symmetry diagnostics, breaking predictions and the experiments
//! that test them on the 3D solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{evolve_ns3d_registered, FrameRegistration, RunRecord, SolverConfig};
use crate::frames::{check_frames, recover_potentials, synthesize, FrameVector, Potential, Rep12Mode, RepKind, SymplecticRep};
use crate::grid::interp::{sample, Interpolation};
use crate::grid::ops::{to_hat, to_real};
use crate::grid::{Grid, GridField};
use crate::radial::{chebyshev_radii, check_rep11, check_rep12_perp, check_rep22, ode_residuals, OdeSystem, RadialProfile};

/// Outermost shell as a fraction of the box length.
pub const SHELL_EXTENT: f64 = 0.35;
pub const MIN_DIRECTIONS: usize = 128;
const RMS_FLOOR: f64 = 1e-14;
/// Radii per profile at which constraint residuals are sampled.
pub const CHECK_RADII: usize = 64;
/// Residuals below this times their scale count as zero.
pub const PERSIST_TOL: f64 = 1e-8;

/// `n` nearly uniform unit vectors on the sphere.
pub fn fibonacci_directions(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let s = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            [s * t.cos(), s * t.sin(), z]
        })
        .collect()
}

fn circle_directions(n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|i| {
            // half-step offset keeps the directions off the grid axes
            let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
            [t.cos(), t.sin(), 0.0]
        })
        .collect()
}

/// `r_k = k·0.35L/shells`, `k = 1..=shells`.
pub fn shell_radii(grid: &Grid, shells: usize) -> Vec<f64> {
    let outer = SHELL_EXTENT * grid.length();
    (1..=shells).map(|k| k as f64 * outer / shells as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnisotropyOptions {
    pub shells: usize,
    pub ndirs: usize,
    pub interpolation: Interpolation,
}

impl Default for AnisotropyOptions {
    fn default() -> Self {
        AnisotropyOptions { shells: 12, ndirs: MIN_DIRECTIONS, interpolation: Interpolation::Cubic }
    }
}

/// Per-shell anisotropy of one snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnisotropyReport {
    pub shells: Vec<f64>,
    pub per_shell: Vec<f64>,
    pub global: f64,
    /// Global value at the start of the run it belongs to.
    pub baseline: Option<f64>,
    pub ball_rms: f64,
    pub ndirs: usize,
    pub interpolation: Interpolation,
}

/// `a(r_k)`: standard deviation of `f` over directions on the shell, divided
/// by the rms of `f` over the ball `|x| ≤ 0.35L`.
pub fn anisotropy_profile(f: &GridField, opts: AnisotropyOptions) -> Result<AnisotropyReport> {
    anisotropy_of(&[f], opts)
}

/// Joint anisotropy of several scalars: the per-shell deviations and the
/// ball rms values are combined in quadrature.
pub fn anisotropy_of(fields: &[&GridField], opts: AnisotropyOptions) -> Result<AnisotropyReport> {
    let first = fields.first().ok_or_else(|| Error::Shape("no field given".into()))?;
    let grid = *first.grid();
    for f in fields {
        if !f.is_scalar() || f.grid() != &grid {
            return Err(Error::Shape("anisotropy needs scalars on a common grid".into()));
        }
    }
    if opts.ndirs < MIN_DIRECTIONS || opts.shells == 0 {
        return Err(Error::Config(format!(
            "anisotropy needs at least {MIN_DIRECTIONS} directions and one shell"
        )));
    }
    let dirs = if grid.dim() == 3 { fibonacci_directions(opts.ndirs) } else { circle_directions(opts.ndirs) };
    let shells = shell_radii(&grid, opts.shells);
    let mut points = Vec::with_capacity(shells.len() * dirs.len());
    for &r in &shells {
        points.extend(dirs.iter().map(|d| d.map(|c| c * r)));
    }
    let outer = SHELL_EXTENT * grid.length();
    let mut var = vec![0.0; shells.len()];
    let mut ms = 0.0;
    for f in fields {
        let values = sample(f, &points, opts.interpolation)?;
        for (k, chunk) in values.chunks(dirs.len()).enumerate() {
            let mean = chunk.iter().sum::<f64>() / chunk.len() as f64;
            var[k] += chunk.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / chunk.len() as f64;
        }
        ms += ball_mean_square(f, outer);
    }
    let denom = ms.sqrt() + RMS_FLOOR;
    let per_shell: Vec<f64> = var.iter().map(|v| v.sqrt() / denom).collect();
    let global = per_shell.iter().cloned().fold(0.0, f64::max);
    Ok(AnisotropyReport {
        shells,
        per_shell,
        global,
        baseline: None,
        ball_rms: ms.sqrt(),
        ndirs: opts.ndirs,
        interpolation: opts.interpolation,
    })
}

fn ball_mean_square(f: &GridField, radius: f64) -> f64 {
    let grid = f.grid();
    let (mut acc, mut count) = (0.0, 0usize);
    for (i, v) in f.data().iter().enumerate() {
        let x = grid.point(i);
        if x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= radius * radius {
            acc += v * v;
            count += 1;
        }
    }
    if count == 0 {
        0.0
    } else {
        acc / count as f64
    }
}

/// Share of `Σ_r r Σ_θ f²` carried by the non-constant angular modes on the
/// circles `r_k` of a planar field. Values are interpolated spectrally.
pub fn angular_mode_fraction(f: &GridField, radii: &[f64], nangles: usize) -> Result<f64> {
    if f.grid().dim() != 2 || !f.is_scalar() {
        return Err(Error::Shape("angular modes need a planar scalar".into()));
    }
    let dirs = circle_directions(nangles);
    let mut points = Vec::with_capacity(radii.len() * nangles);
    for &r in radii {
        points.extend(dirs.iter().map(|d| d.map(|c| c * r)));
    }
    let values = sample(f, &points, Interpolation::Spectral)?;
    let (mut off, mut total) = (0.0, 0.0);
    for (chunk, &r) in values.chunks(nangles).zip(radii) {
        let mean = chunk.iter().sum::<f64>() / nangles as f64;
        // Parseval: the m ≠ 0 energy is the variance over the circle
        off += r * chunk.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
        total += r * chunk.iter().map(|v| v * v).sum::<f64>();
    }
    Ok(if total > 0.0 { off / total } else { 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    Persist,
    Break,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualNorm {
    pub name: String,
    /// Largest `|residual|` over the sample radii.
    pub max_abs: f64,
    /// Largest term magnitude over the sample radii.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakingPrediction {
    pub system: OdeSystem,
    pub residual_norms: Vec<ResidualNorm>,
    pub r_check: f64,
    pub predicted: Prediction,
    pub exceptional_family_match: Option<String>,
}

impl BreakingPrediction {
    pub fn residuals_vanish(&self) -> bool {
        self.residual_norms.iter().all(|n| n.max_abs <= PERSIST_TOL * n.scale || n.max_abs == 0.0)
    }
}

/// Predicts whether radial potentials stay radial.
///
/// The aligned (1,2) case persists iff the radial ODE pair holds. For the
/// other representations the reduced constraints are necessary but not
/// sufficient: only the polynomial exceptional families persist, so the
/// family predicate must match as well.
pub fn predict_breaking(
    kind: RepKind,
    mode: Option<Rep12Mode>,
    phi: &RadialProfile,
    psi: &RadialProfile,
    r_check: Option<f64>,
) -> Result<BreakingPrediction> {
    let system = match (kind, mode) {
        (RepKind::Rep12, Some(Rep12Mode::Aligned)) => OdeSystem::Pair12,
        (RepKind::Rep12, Some(Rep12Mode::Perpendicular)) => OdeSystem::Constraints12Perp,
        (RepKind::Rep12, None) => {
            return Err(Error::InvalidFrame("a (1,2) prediction needs the frame mode".into()))
        }
        (RepKind::Rep11, _) => OdeSystem::Constraints11,
        (RepKind::Rep22, _) => OdeSystem::Constraints22,
    };
    let (op, os) = system.orders();
    for (p, need) in [(phi, op), (psi, os)] {
        if p.max_order() < need {
            return Err(Error::UnsupportedOrder {
                family: p.family_name(),
                requested: need,
                available: p.max_order(),
            });
        }
    }
    let r_check = r_check.unwrap_or(10.0 * phi.scale().max(psi.scale()));
    let mut norms: Vec<ResidualNorm> = Vec::new();
    for r in chebyshev_radii(CHECK_RADII, 0.0, r_check) {
        for res in ode_residuals(system, phi, psi, r)? {
            match norms.iter_mut().find(|n| n.name == res.name) {
                Some(n) => {
                    n.max_abs = n.max_abs.max(res.value.abs());
                    n.scale = n.scale.max(res.scale);
                }
                None => norms.push(ResidualNorm { name: res.name, max_abs: res.value.abs(), scale: res.scale }),
            }
        }
    }
    let exceptional = match system {
        OdeSystem::Pair12 => None,
        OdeSystem::Constraints11 => check_rep11(phi, psi).ok().map(|_| "poly11"),
        OdeSystem::Constraints22 => check_rep22(phi, psi).ok().map(|_| "poly22"),
        OdeSystem::Constraints12Perp => check_rep12_perp(phi, psi).ok().map(|_| "poly12perp"),
    };
    let mut out = BreakingPrediction {
        system,
        residual_norms: norms,
        r_check,
        predicted: Prediction::Break,
        exceptional_family_match: exceptional.map(String::from),
    };
    let persist = out.residuals_vanish() && (system == OdeSystem::Pair12 || exceptional.is_some());
    if persist {
        out.predicted = Prediction::Persist;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Persist,
    Break,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    pub break_factor: f64,
    pub break_absolute: f64,
    pub persist_factor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { break_factor: 10.0, break_absolute: 1e-3, persist_factor: 3.0 }
    }
}

impl Thresholds {
    /// Verdict for a global anisotropy series whose first entry is the baseline.
    pub fn classify(&self, series: &[f64]) -> Verdict {
        let Some(&baseline) = series.first() else {
            return Verdict::Inconclusive;
        };
        if series.iter().any(|&a| a > self.break_factor * baseline && a > self.break_absolute) {
            Verdict::Break
        } else if series.iter().all(|&a| a <= self.persist_factor * baseline) {
            Verdict::Persist
        } else {
            Verdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frames {
    pub a: FrameVector,
    pub b: FrameVector,
}

/// A persistence/breaking experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub rep: RepKind,
    pub frames: Frames,
    pub phi0: RadialProfile,
    pub psi0: RadialProfile,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub anisotropy: AnisotropyOptions,
    /// Smooth cutoff applied to the potentials.
    #[serde(default)]
    pub cutoff: Option<Cutoff>,
}

/// `½(1 − tanh((r − radius·L)/(width·L)))`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub radius: f64,
    pub width: f64,
}

impl Cutoff {
    pub fn at(radius: f64, width: f64) -> Self {
        Cutoff { radius, width }
    }

    pub fn value(&self, r: f64, length: f64) -> f64 {
        0.5 * (1.0 - ((r - self.radius * length) / (self.width * length)).tanh())
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub prediction: BreakingPrediction,
    pub series: Vec<(f64, AnisotropyReport)>,
    pub verdict: Verdict,
    pub thresholds: Thresholds,
    pub run: RunRecord,
}

impl ExperimentOutcome {
    pub fn baseline(&self) -> f64 {
        self.series.first().map_or(0.0, |(_, r)| r.global)
    }

    pub fn max_global(&self) -> f64 {
        self.series.iter().map(|(_, r)| r.global).fold(0.0, f64::max)
    }

    /// `t,global,baseline,per-shell…` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,anisotropy,baseline");
        if let Some((_, r)) = self.series.first() {
            for k in 0..r.shells.len() {
                s.push_str(&format!(",shell_{k}"));
            }
        }
        s.push('\n');
        for (t, r) in &self.series {
            s.push_str(&format!("{t},{},{}", r.global, self.baseline()));
            for a in &r.per_shell {
                s.push_str(&format!(",{a}"));
            }
            s.push('\n');
        }
        s
    }

    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "verdict": self.verdict,
            "prediction": self.prediction,
            "thresholds": self.thresholds,
            "baseline": self.baseline(),
            "max_anisotropy": self.max_global(),
            "anisotropy": self.series.iter().map(|(t, r)| serde_json::json!({"t": t, "report": r})).collect::<Vec<_>>(),
            "abort": self.run.abort,
            "wall_time": self.run.wall_time,
        })
    }
}

/// Samples `p` (times the optional cutoff) on the grid.
fn potential_on_grid(p: &RadialProfile, grid: Grid, cutoff: Option<Cutoff>) -> Result<GridField> {
    GridField::try_scalar_from_fn(grid, |x| {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        let chi = cutoff.map_or(1.0, |c| c.value(r, grid.length()));
        Ok(if chi < 1e-300 { 0.0 } else { chi * p.value(r)? })
    })
}

/// Fills the modes flagged in `killed` with the mean over the remaining
/// modes of the same `|k|²`, after removing the `(−1)^{k1+k2+k3}` phase of
/// the origin-centered grid.
///
/// A radial field sampled on the grid is unchanged by this; recovered
/// potentials lose whole planes or lines of modes, which would otherwise
/// read as anisotropy.
pub fn radial_completion(f: &GridField, killed: &[bool]) -> Result<GridField> {
    let grid = *f.grid();
    if !f.is_scalar() || killed.len() != grid.len() {
        return Err(Error::Shape("completion needs a scalar and one flag per mode".into()));
    }
    let mut hat = to_hat(&grid, f.data());
    let sign = |i: usize| if grid.k(i).iter().sum::<i64>().rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let key = |i: usize| grid.k(i).iter().map(|k| k * k).sum::<i64>();
    let mut sums: std::collections::HashMap<i64, (num_complex::Complex64, usize)> = Default::default();
    for i in 0..grid.len() {
        if !killed[i] {
            let e = sums.entry(key(i)).or_default();
            e.0 += sign(i) * hat[i];
            e.1 += 1;
        }
    }
    for i in 0..grid.len() {
        if killed[i] && i != 0 {
            if let Some((s, c)) = sums.get(&key(i)) {
                hat[i] = sign(i) * s / *c as f64;
            }
        }
    }
    GridField::new(grid, 1, to_real(&grid, hat))
}

/// Synthesizes `u0` from radial potentials, evolves it and tracks the
/// anisotropy of the recovered potentials.
pub fn run_symmetry_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let grid = Grid::new(3, cfg.grid.n, cfg.grid.length)?;
    let mode = check_frames(cfg.rep, cfg.frames.a, cfg.frames.b)?;
    let prediction = predict_breaking(cfg.rep, mode, &cfg.phi0, &cfg.psi0, None)?;
    let phi = potential_on_grid(&cfg.phi0, grid, cfg.cutoff)?;
    let psi = potential_on_grid(&cfg.psi0, grid, cfg.cutoff)?;
    let rep = SymplecticRep::new(cfg.rep, cfg.frames.a, cfg.frames.b, Potential::Grid(phi), Potential::Grid(psi))?;
    let u0 = synthesize(&rep)?;
    let frames = FrameRegistration { kind: cfg.rep, a: cfg.frames.a, b: cfg.frames.b };
    let run = evolve_ns3d_registered(&u0, &cfg.solver, Some(frames))?;
    // the killed sets depend only on the frames and the grid
    let masks = recover_potentials(&u0, None, cfg.rep, cfg.frames.a, cfg.frames.b)?;
    let mut series = Vec::with_capacity(run.snapshots.len());
    for s in &run.snapshots {
        let (Some(phi), Some(psi)) = (s.field("phi"), s.field("psi")) else {
            return Err(Error::Shape("snapshot without recovered potentials".into()));
        };
        let phi = radial_completion(phi, masks.killed_modes_phi())?;
        let psi = radial_completion(psi, masks.killed_modes_psi())?;
        series.push((s.t, anisotropy_of(&[&phi, &psi], cfg.anisotropy)?));
    }
    let baseline = series.first().map_or(0.0, |(_, r)| r.global);
    for (_, r) in series.iter_mut() {
        r.baseline = Some(baseline);
    }
    let globals: Vec<f64> = series.iter().map(|(_, r)| r.global).collect();
    let verdict = cfg.thresholds.classify(&globals);
    log::info!("symmetry experiment: baseline {baseline:.3e}, max {:.3e}, {verdict:?}", globals.iter().cloned().fold(0.0, f64::max));
    Ok(ExperimentOutcome { prediction, series, verdict, thresholds: cfg.thresholds, run })
}

/// An orthogonal map `x ↦ Qx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Orthogonal {
    m: [[f64; 3]; 3],
}

fn matmul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn transpose(a: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

/// Matrix whose columns are the given vectors.
fn columns(c: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    transpose(&c)
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|c| c / n)
}

impl Orthogonal {
    /// Checks `QᵀQ = I` to 1e-12.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self> {
        let p = matmul(&transpose(&m), &m);
        let mut err: f64 = 0.0;
        for (i, row) in p.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                err = err.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        if err > 1e-12 {
            return Err(Error::NotOrthogonal(err));
        }
        Ok(Orthogonal { m })
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn identity() -> Self {
        Orthogonal { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// `(x1, x2, x3) ↦ (x2, x3, x1)`
    pub fn cyclic() -> Self {
        Orthogonal { m: [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]] }
    }

    /// `(x1, x2, x3) ↦ (x3, x1, x2)`
    pub fn inverse_cyclic() -> Self {
        Orthogonal { m: [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] }
    }

    /// Quarter turn about `b`.
    pub fn quarter_turn_about(b: FrameVector) -> Self {
        let bh = unit(b.as_array());
        let [b1, b2, b3] = bh;
        let t = (b2 * b2 + b3 * b3).sqrt();
        // orthonormal completion of b̂; falls back when b̂ = ±e1
        let (e1, e2) = if t > 1e-8 {
            ([0.0, b3 / t, -b2 / t], [-t, b1 * b2 / t, b1 * b3 / t])
        } else {
            ([0.0, 1.0, 0.0], [0.0, 0.0, b1.signum()])
        };
        let m = columns([e1, e2, bh]);
        // quarter turn in the (e1, e2) plane
        let r = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
        Orthogonal { m: matmul(&matmul(&m, &r), &transpose(&m)) }
    }

    /// Reflection through span{A, B}; fixes `A·x`, `B·x` and `|x|`.
    pub fn reflection_fixing(a: FrameVector, b: FrameVector) -> Result<Self> {
        let (av, bv) = (a.as_array(), b.as_array());
        let n = crate::frames::cross(av, bv);
        if (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt() <= 1e-12 * a.norm() * b.norm() {
            return Err(Error::InvalidFrame("A and B must be linearly independent".into()));
        }
        let ah = unit(av);
        let d = crate::frames::dot(av, bv) / crate::frames::dot(av, av);
        let bp = unit([bv[0] - d * av[0], bv[1] - d * av[1], bv[2] - d * av[2]]);
        let m = columns([ah, bp, unit(n)]);
        let s = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
        Ok(Orthogonal { m: matmul(&matmul(&m, &s), &transpose(&m)) })
    }

    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| (0..3).map(|k| self.m[i][k] * x[k]).sum())
    }

    pub fn apply_inverse(&self, x: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| (0..3).map(|k| self.m[k][i] * x[k]).sum())
    }

    pub fn inverse(&self) -> Self {
        Orthogonal { m: transpose(&self.m) }
    }

    pub fn compose(&self, other: &Orthogonal) -> Self {
        Orthogonal { m: matmul(&self.m, &other.m) }
    }
}

/// `f∘Q⁻¹` for a 3D scalar, or `Q u(Q⁻¹x)` for a 3D vector field, by
/// interpolation.
pub fn orthogonal_conjugate(f: &GridField, q: &Orthogonal, method: Interpolation) -> Result<GridField> {
    let grid = *f.grid();
    if grid.dim() != 3 {
        return Err(Error::Shape("conjugation needs a 3D field".into()));
    }
    let pts: Vec<[f64; 3]> = (0..grid.len()).map(|i| q.apply_inverse(grid.point(i))).collect();
    match f.components() {
        1 => GridField::new(grid, 1, sample(f, &pts, method)?),
        3 => {
            let comps: Vec<Vec<f64>> = (0..3)
                .map(|c| sample(&f.scalar_component(c), &pts, method))
                .collect::<Result<_>>()?;
            let mut data = vec![0.0; 3 * grid.len()];
            for i in 0..grid.len() {
                let v = q.apply([comps[0][i], comps[1][i], comps[2][i]]);
                for c in 0..3 {
                    data[c * grid.len() + i] = v[c];
                }
            }
            GridField::new(grid, 3, data)
        }
        _ => Err(Error::Shape("conjugation needs a scalar or a 3-vector".into())),
    }
}

/// `x ↦ f(Q⁻¹x)` for closed-form scalars.
pub fn conjugate_fn<F: Fn([f64; 3]) -> f64>(f: F, q: Orthogonal) -> impl Fn([f64; 3]) -> f64 {
    move |x| f(q.apply_inverse(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r2(x: [f64; 3]) -> f64 {
        x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
    }

    #[test]
    fn radial_gaussian_is_isotropic() {
        let grid = Grid::new(3, 24, 8.0).unwrap();
        let f = GridField::scalar_from_fn(grid, |x| (-r2(x)).exp());
        let opts = AnisotropyOptions { interpolation: Interpolation::Spectral, ..Default::default() };
        let rep = anisotropy_profile(&f, opts).unwrap();
        assert!(rep.global < 1e-6, "{}", rep.global);
        assert_eq!(rep.shells.len(), 12);
        assert!((rep.shells[11] - 0.35 * 8.0).abs() < 1e-14);
    }

    #[test]
    fn dipole_is_anisotropic() {
        let grid = Grid::new(3, 32, 8.0).unwrap();
        let f = GridField::scalar_from_fn(grid, |x| x[0] * (-r2(x)).exp());
        let rep = anisotropy_profile(&f, AnisotropyOptions::default()).unwrap();
        // shells at 0.233k; the mid shells sit near the dipole maximum
        assert!(rep.per_shell[2] > 0.1 && rep.per_shell[3] > 0.1, "{:?}", rep.per_shell);
    }

    #[test]
    fn zero_field_has_zero_anisotropy() {
        let grid = Grid::new(3, 8, 4.0).unwrap();
        let rep = anisotropy_profile(&GridField::zeros(grid, 1), AnisotropyOptions::default()).unwrap();
        assert!(rep.per_shell.iter().all(|&a| a == 0.0));
        assert!(anisotropy_profile(&GridField::zeros(grid, 1), AnisotropyOptions { ndirs: 10, ..Default::default() }).is_err());
    }

    #[test]
    fn planar_angular_fraction() {
        let grid = Grid::new(2, 64, 16.0).unwrap();
        let g = GridField::scalar_from_fn(grid, |x| (-r2(x)).exp());
        let radii = shell_radii(&grid, 8);
        assert!(angular_mode_fraction(&g, &radii, 64).unwrap() < 1e-20);
        let h = GridField::scalar_from_fn(grid, |x| (1.0 + 0.1 * x[0]) * (-r2(x)).exp());
        assert!(angular_mode_fraction(&h, &radii, 64).unwrap() > 1e-4);
    }

    #[test]
    fn predictions_follow_the_dichotomy() {
        let lam = 1.7;
        let aligned = Some(Rep12Mode::Aligned);
        let p = predict_breaking(RepKind::Rep12, aligned, &RadialProfile::sinc(lam, lam, 0.0), &RadialProfile::sinc(lam, 1.0, 0.0), None).unwrap();
        assert_eq!(p.predicted, Prediction::Persist);
        assert_eq!(p.system, OdeSystem::Pair12);
        let q = predict_breaking(RepKind::Rep12, aligned, &RadialProfile::poly(&[(2, 1.0)]), &RadialProfile::poly(&[(3, 1.0)]), None).unwrap();
        assert_eq!(q.predicted, Prediction::Break);

        let r22 = predict_breaking(RepKind::Rep22, None, &RadialProfile::poly(&[(4, 1.0)]), &RadialProfile::poly(&[(2, 1.0)]), None).unwrap();
        assert_eq!(r22.predicted, Prediction::Break);
        assert!(r22.exceptional_family_match.is_none());
        let ok22 = predict_breaking(RepKind::Rep22, None, &RadialProfile::poly(&[(4, 2.0), (2, 1.0)]), &RadialProfile::poly(&[(4, 4.0), (2, 2.0)]), None).unwrap();
        assert_eq!(ok22.predicted, Prediction::Persist);
        let g = predict_breaking(RepKind::Rep22, None, &RadialProfile::gaussian(1.0, 1.0), &RadialProfile::zero(), None).unwrap();
        assert_eq!(g.predicted, Prediction::Break);

        let r11 = predict_breaking(RepKind::Rep11, None, &RadialProfile::poly(&[(2, 1.0)]), &RadialProfile::poly(&[(2, 1.0)]), None).unwrap();
        assert_eq!(r11.predicted, Prediction::Persist);
        assert_eq!(r11.exceptional_family_match.as_deref(), Some("poly11"));
        let c11 = predict_breaking(RepKind::Rep11, None, &RadialProfile::poly(&[(3, 1.0)]), &RadialProfile::zero(), None).unwrap();
        assert_eq!(c11.predicted, Prediction::Break);

        let perp = Some(Rep12Mode::Perpendicular);
        let p1 = predict_breaking(RepKind::Rep12, perp, &RadialProfile::poly(&[(2, 1.0)]), &RadialProfile::poly(&[(2, 3.0)]), None).unwrap();
        assert_eq!(p1.predicted, Prediction::Persist);
        let p2 = predict_breaking(RepKind::Rep12, perp, &RadialProfile::poly(&[(2, 1.0)]), &RadialProfile::poly(&[(4, 1.0)]), None).unwrap();
        assert_eq!(p2.predicted, Prediction::Break);
        assert!(predict_breaking(RepKind::Rep12, None, &RadialProfile::zero(), &RadialProfile::zero(), None).is_err());
    }

    #[test]
    fn exceptional_residuals_are_tiny() {
        let cases = [
            (RepKind::Rep11, None, RadialProfile::poly(&[(2, 1.5), (0, 2.0)]), RadialProfile::poly(&[(2, -0.5)])),
            (RepKind::Rep22, None, RadialProfile::poly(&[(4, 1.0), (2, 3.0)]), RadialProfile::poly(&[(4, -2.0), (2, -6.0), (0, 1.0)])),
            (RepKind::Rep12, Some(Rep12Mode::Perpendicular), RadialProfile::zero(), RadialProfile::poly(&[(4, 1.0), (2, 2.0)])),
        ];
        for (k, m, f, g) in cases {
            let p = predict_breaking(k, m, &f, &g, None).unwrap();
            for n in &p.residual_norms {
                assert!(n.max_abs <= 1e-12 * n.scale.max(1.0), "{k:?} {} {}", n.name, n.max_abs);
            }
        }
    }

    #[test]
    fn verdict_thresholds() {
        let t = Thresholds::default();
        assert_eq!(t.classify(&[1e-4, 2e-4, 2.9e-4]), Verdict::Persist);
        assert_eq!(t.classify(&[1e-4, 5e-4, 2e-3]), Verdict::Break);
        assert_eq!(t.classify(&[1e-4, 5e-4]), Verdict::Inconclusive);
        assert_eq!(t.classify(&[1e-5, 5e-4]), Verdict::Inconclusive);
        assert_eq!(t.classify(&[0.0, 0.0]), Verdict::Persist);
    }

    #[test]
    fn orthogonal_maps() {
        let rho = Orthogonal::cyclic();
        assert_eq!(rho.apply([1.0, 2.0, 3.0]), [2.0, 3.0, 1.0]);
        assert_eq!(Orthogonal::inverse_cyclic().apply([1.0, 2.0, 3.0]), [3.0, 1.0, 2.0]);
        assert_eq!(rho.compose(&rho).compose(&rho), Orthogonal::identity());
        assert!(matches!(Orthogonal::new([[1.0, 0.1, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]), Err(Error::NotOrthogonal(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let b = FrameVector::new([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).unwrap();
            let a = FrameVector::new([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).unwrap();
            let rb = Orthogonal::quarter_turn_about(b);
            Orthogonal::new(rb.matrix()).unwrap();
            let rab = Orthogonal::reflection_fixing(a, b).unwrap();
            Orthogonal::new(rab.matrix()).unwrap();
            let x = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            assert!((dot(b.as_array(), rb.apply(x)) - dot(b.as_array(), x)).abs() < 1e-12);
            assert!((dot(a.as_array(), rab.apply(x)) - dot(a.as_array(), x)).abs() < 1e-12);
            assert!((dot(b.as_array(), rab.apply(x)) - dot(b.as_array(), x)).abs() < 1e-12);
            assert!((r2(rab.apply(x)) - r2(x)).abs() < 1e-11);
            // a quarter turn is not the identity off the axis
            assert!((0..3).any(|i| (rb.apply(x)[i] - x[i]).abs() > 1e-6));
        }
        let along_e1 = Orthogonal::quarter_turn_about(FrameVector::e1());
        assert_eq!(along_e1.apply([1.0, 0.0, 0.0]), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn conjugation_leaves_radial_fields_alone() {
        let grid = Grid::new(3, 24, 8.0).unwrap();
        let f = GridField::scalar_from_fn(grid, |x| (-r2(x)).exp());
        let q = Orthogonal::quarter_turn_about(FrameVector::new([1.0, 2.0, 0.5]).unwrap());
        let g = orthogonal_conjugate(&f, &q, Interpolation::Spectral).unwrap();
        // rotations only map the inscribed ball into the periodic cell
        let d = g.sub(&f).unwrap();
        for i in 0..grid.len() {
            if r2(grid.point(i)).sqrt() <= 0.45 * 8.0 {
                assert!(d.data()[i].abs() < 1e-6, "{}", d.data()[i]);
            }
        }
        let h = conjugate_fn(|x| x[0], Orthogonal::cyclic());
        assert_eq!(h([1.0, 2.0, 3.0]), 3.0);
    }

    #[test]
    fn zero_velocity_persists_trivially() {
        let cfg = ExperimentConfig {
            rep: RepKind::Rep22,
            frames: Frames { a: FrameVector::e1(), b: FrameVector::e2() },
            phi0: RadialProfile::zero(),
            psi0: RadialProfile::zero(),
            grid: GridSpec { n: 8, length: 8.0 },
            solver: SolverConfig::new(0.05, 0.1, 0.2),
            thresholds: Thresholds::default(),
            anisotropy: AnisotropyOptions::default(),
            cutoff: None,
        };
        let out = run_symmetry_experiment(&cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Persist);
        assert_eq!(out.series.len(), 3);
        assert!(out.to_csv().lines().count() == 4);
    }
}
