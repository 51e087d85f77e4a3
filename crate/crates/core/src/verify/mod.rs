//! Residual checks for the incompressible Euler and Navier–Stokes equations,
//! the heat and vorticity equations, and the energy balance.
//!
//! Gridded inputs are differentiated spectrally. Pointwise samplers are
//! differentiated with eighth-order centered stencils ([`stencil`]), which
//! keeps them independent of the closed forms they check.

pub mod stencil;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::catalog::{ExactSolution, SolutionState};
use crate::error::{Error, Result};
use crate::grid::ops::{dealias_hat, to_hat, to_real};
use crate::grid::{advect, diff, solve_poisson, DiffOp, Grid, GridField};
use stencil::DEFAULT_STEP;

/// Relative divergence above which a field is refused by the Euler checks.
pub const SOLENOIDAL_TOL: f64 = 1e-8;

/// Outcome of one residual check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub l2: f64,
    pub linf: f64,
    pub scale: f64,
    pub tol: f64,
    pub passed: bool,
    pub meta: serde_json::Value,
}

impl ResidualReport {
    pub fn new(check: &str, l2: f64, linf: f64, scale: f64, tol: f64, meta: serde_json::Value) -> Self {
        ResidualReport {
            check: check.to_string(),
            l2,
            linf,
            scale,
            tol,
            passed: linf <= tol * scale,
            meta,
        }
    }

    /// `linf / scale`, or `linf` for a vanishing scale.
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.linf / self.scale
        } else {
            self.linf
        }
    }

    /// Same report judged against another tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.passed = self.linf <= tol * self.scale;
        self
    }
}

/// A velocity field known at arbitrary points.
pub trait VelocitySampler {
    fn dim(&self) -> usize;

    fn velocity(&self, x: [f64; 3]) -> Result<[f64; 3]>;

    /// `J[i][j] = ∂_j u_i`; finite differences unless overridden.
    fn jacobian(&self, x: [f64; 3]) -> Result<[[f64; 3]; 3]> {
        stencil::jacobian(&|y| self.velocity(y), x, self.dim(), self.step())
    }

    /// Finite-difference spacing used on this sampler.
    fn step(&self) -> f64 {
        DEFAULT_STEP
    }
}

impl VelocitySampler for SolutionState<'_> {
    fn dim(&self) -> usize {
        self.solution().dim()
    }

    fn velocity(&self, x: [f64; 3]) -> Result<[f64; 3]> {
        SolutionState::velocity(self, x)
    }

    fn jacobian(&self, x: [f64; 3]) -> Result<[[f64; 3]; 3]> {
        SolutionState::jacobian(self, x)
    }

    fn step(&self) -> f64 {
        self.solution().stencil_step()
    }
}

/// Wraps a plain closure as a sampler.
pub struct FnSampler<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn([f64; 3]) -> [f64; 3]> VelocitySampler for FnSampler<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn velocity(&self, x: [f64; 3]) -> Result<[f64; 3]> {
        Ok((self.f)(x))
    }
}

/// A velocity on a grid or at scattered points.
pub enum FieldInput<'a> {
    Grid(&'a GridField),
    Points {
        sampler: &'a dyn VelocitySampler,
        points: &'a [[f64; 3]],
    },
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `(l2, linf)` of pointwise residual magnitudes (l2 is the RMS).
fn point_norms(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let ms = values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64;
    (ms.sqrt(), values.iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// `(l2, linf)` of a grid field, `linf` taken over pointwise Euclidean norms.
fn grid_norms(f: &GridField) -> (f64, f64) {
    (f.l2(), f.pointwise_max_norm())
}

fn grid_meta(g: &Grid) -> serde_json::Value {
    json!({"grid": {"dim": g.dim(), "n": g.n(), "length": g.length()}})
}

fn points_meta(n: usize, h: f64) -> serde_json::Value {
    json!({"points": n, "step": h})
}

fn check_vector(u: &GridField) -> Result<()> {
    if u.components() != u.grid().dim() {
        return Err(Error::Shape("expected a velocity field".into()));
    }
    Ok(())
}

/// Largest entry of the spectral velocity gradient.
fn gradient_scale(u: &GridField) -> Result<f64> {
    let mut m = 0.0f64;
    for c in 0..u.components() {
        m = m.max(diff(&u.scalar_component(c), DiffOp::Gradient)?.linf());
    }
    Ok(m)
}

/// `|∇·u|`.
pub fn residual_divergence(input: FieldInput<'_>, tol: f64) -> Result<ResidualReport> {
    match input {
        FieldInput::Grid(u) => {
            check_vector(u)?;
            let d = diff(u, DiffOp::Divergence)?;
            let (l2, linf) = grid_norms(&d);
            Ok(ResidualReport::new("divergence", l2, linf, u.pointwise_max_norm(), tol, grid_meta(u.grid())))
        }
        FieldInput::Points { sampler, points } => {
            let h = sampler.step();
            let mut vals = Vec::with_capacity(points.len());
            let mut scale = 0.0f64;
            for &x in points {
                scale = scale.max(norm3(sampler.velocity(x)?));
                vals.push(stencil::divergence(&|y| sampler.velocity(y), x, sampler.dim(), h)?.abs());
            }
            let (l2, linf) = point_norms(&vals);
            Ok(ResidualReport::new("divergence", l2, linf, scale, tol, points_meta(points.len(), h)))
        }
    }
}

/// `n` points uniformly distributed in the shell `r_lo ≤ |x| ≤ r_hi` of
/// dimension `dim` (unused coordinates are zero).
pub fn random_shell_points(n: usize, r_lo: f64, r_hi: f64, dim: usize, seed: u64) -> Vec<[f64; 3]> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let d = dim as i32;
    (0..n)
        .map(|_| {
            let mut x = [0.0; 3];
            loop {
                for v in x.iter_mut().take(dim) {
                    *v = standard_normal(&mut rng);
                }
                if norm3(x) > 1e-12 {
                    break;
                }
            }
            let u: f64 = rng.gen();
            let r = (r_lo.powi(d) + u * (r_hi.powi(d) - r_lo.powi(d))).powf(1.0 / dim as f64);
            let s = r / norm3(x);
            x.map(|c| c * s)
        })
        .collect()
}

/// Standard normal sample (Box–Muller).
fn standard_normal(rng: &mut impl rand::Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Pointwise `|∇×u + λu| / |u|` with a finite-difference curl; `scale` is 1.
pub fn residual_beltrami(sampler: &dyn VelocitySampler, points: &[[f64; 3]], lambda: f64, tol: f64) -> Result<ResidualReport> {
    if sampler.dim() != 3 {
        return Err(Error::Shape("Beltrami fields are three-dimensional".into()));
    }
    let h = sampler.step();
    let mut vals = Vec::with_capacity(points.len());
    for &x in points {
        let u = sampler.velocity(x)?;
        let c = stencil::curl(&|y| sampler.velocity(y), x, 3, h)?;
        let r = norm3([0, 1, 2].map(|i| c[i] + lambda * u[i]));
        let nu = norm3(u);
        vals.push(if nu > 0.0 { r / nu } else { r });
    }
    let (l2, linf) = point_norms(&vals);
    let mut meta = points_meta(points.len(), h);
    meta["lambda"] = json!(lambda);
    Ok(ResidualReport::new("beltrami", l2, linf, 1.0, tol, meta))
}

/// Static Euler in curl form: `|∇×((u·∇)u)|` against `‖(u·∇)u‖∞`.
pub fn residual_static_euler(input: FieldInput<'_>, tol: f64) -> Result<ResidualReport> {
    match input {
        FieldInput::Grid(u) => {
            check_vector(u)?;
            let div = diff(u, DiffOp::Divergence)?.linf();
            let gs = gradient_scale(u)?;
            if div > SOLENOIDAL_TOL * gs {
                return Err(Error::NotSolenoidal(div / gs));
            }
            let adv = advect(u)?;
            let c = diff(&adv, DiffOp::Curl)?;
            let (l2, linf) = grid_norms(&c);
            Ok(ResidualReport::new("static_euler", l2, linf, adv.pointwise_max_norm(), tol, grid_meta(u.grid())))
        }
        FieldInput::Points { sampler, points } => {
            let dim = sampler.dim();
            let h = sampler.step();
            let adv = |y: [f64; 3]| -> Result<[f64; 3]> {
                let u = sampler.velocity(y)?;
                let j = sampler.jacobian(y)?;
                Ok([0, 1, 2].map(|i| j[i][0] * u[0] + j[i][1] * u[1] + j[i][2] * u[2]))
            };
            let mut vals = Vec::with_capacity(points.len());
            let mut scale = 0.0f64;
            let mut worst_div = 0.0f64;
            let mut grad = 0.0f64;
            for &x in points {
                let j = stencil::jacobian(&|y| sampler.velocity(y), x, dim, h)?;
                worst_div = worst_div.max((0..dim).map(|i| j[i][i]).sum::<f64>().abs());
                grad = grad.max(j.iter().flatten().fold(0.0, |m, v| m.max(v.abs())));
                scale = scale.max(norm3(adv(x)?));
                vals.push(norm3(stencil::curl(&adv, x, dim, h)?));
            }
            if worst_div > SOLENOIDAL_TOL * grad {
                return Err(Error::NotSolenoidal(worst_div / grad));
            }
            let (l2, linf) = point_norms(&vals);
            Ok(ResidualReport::new("static_euler", l2, linf, scale, tol, points_meta(points.len(), h)))
        }
    }
}

/// Inputs of the full Navier–Stokes residual.
pub enum NsInput<'a> {
    /// Closed-form solution at scattered points.
    Exact {
        solution: &'a ExactSolution,
        t: f64,
        points: &'a [[f64; 3]],
    },
    /// Closed-form solution sampled on a grid, differentiated spectrally.
    ExactOnGrid {
        solution: &'a ExactSolution,
        t: f64,
        grid: Grid,
    },
    /// Snapshot series; `∂t u` by centered differences around `index`.
    Series {
        times: &'a [f64],
        velocity: &'a [GridField],
        pressure: Option<&'a [GridField]>,
        index: usize,
    },
}

/// `u_t − νΔu + (u·∇)u + ∇P` against `‖νΔu‖∞ + ‖(u·∇)u‖∞`. Families without a
/// closed-form pressure are checked pointwise in curl form.
pub fn residual_ns(input: NsInput<'_>, nu: f64, tol: f64) -> Result<ResidualReport> {
    match input {
        NsInput::Exact { solution, t, points } => ns_pointwise(solution, t, points, nu, tol),
        NsInput::ExactOnGrid { solution, t, grid } => {
            if grid.dim() != solution.dim() {
                return Err(Error::Shape("grid and solution dimensions differ".into()));
            }
            let state = solution.at(t)?;
            let u = GridField::try_vector_from_fn(grid, |x| state.velocity(x))?;
            let ut = GridField::try_vector_from_fn(grid, |x| state.time_derivative(x))?;
            let p = match solution.pressure_form() {
                crate::catalog::PressureForm::CurlOnly => recover_pressure(&u)?,
                _ => GridField::try_scalar_from_fn(grid, |x| Ok(state.pressure(x)?.unwrap_or(0.0)))?,
            };
            let mut rep = ns_grid(&u, &ut, &p, nu, tol)?;
            rep.meta["t"] = json!(t);
            rep.meta["family"] = json!(solution.family());
            Ok(rep)
        }
        NsInput::Series { times, velocity, pressure, index } => {
            let (ut, dt, order) = time_derivative(times, velocity, index)?;
            let u = &velocity[index];
            let p = match pressure {
                Some(ps) => ps
                    .get(index)
                    .cloned()
                    .ok_or(Error::SeriesTooShort { needed: index + 1, got: ps.len() })?,
                None => recover_pressure(u)?,
            };
            let mut rep = ns_grid(u, &ut, &p, nu, tol)?;
            rep.meta["dt"] = json!(dt);
            rep.meta["time_order"] = json!(order);
            rep.meta["t"] = json!(times[index]);
            Ok(rep)
        }
    }
}

fn ns_grid(u: &GridField, ut: &GridField, p: &GridField, nu: f64, tol: f64) -> Result<ResidualReport> {
    check_vector(u)?;
    let visc = diff(u, DiffOp::Laplacian)?.scale(nu);
    let adv = advect(u)?;
    let gp = diff(p, DiffOp::Gradient)?;
    let r = ut.sub(&visc)?.add(&adv)?.add(&gp)?;
    let (l2, linf) = grid_norms(&r);
    let scale = visc.pointwise_max_norm() + adv.pointwise_max_norm();
    Ok(ResidualReport::new("navier_stokes", l2, linf, scale, tol, grid_meta(u.grid())))
}

fn ns_pointwise(sol: &ExactSolution, t: f64, points: &[[f64; 3]], nu: f64, tol: f64) -> Result<ResidualReport> {
    let state = sol.at(t)?;
    let dim = sol.dim();
    let h = sol.stencil_step();
    let vel = |y: [f64; 3]| state.velocity(y);
    let visc = |y: [f64; 3]| -> Result<[f64; 3]> { Ok(stencil::laplacian(&vel, y, dim, h)?.map(|v| nu * v)) };
    let adv = |y: [f64; 3]| state.advection(y);
    let has_pressure = !matches!(sol.pressure_form(), crate::catalog::PressureForm::CurlOnly);
    let mut vals = Vec::with_capacity(points.len());
    let mut scale = 0.0f64;
    for &x in points {
        let v = visc(x)?;
        let a = adv(x)?;
        scale = scale.max(norm3(v) + norm3(a));
        let r = if has_pressure {
            let ut = state.time_derivative(x)?;
            let gp = stencil::gradient(&|y| state.pressure_difference(x, y).map(|p| p.unwrap_or(0.0)), x, dim, h)?;
            [0, 1, 2].map(|i| ut[i] - v[i] + a[i] + gp[i])
        } else {
            let momentum = |y: [f64; 3]| -> Result<[f64; 3]> {
                let ut = state.time_derivative(y)?;
                let v = visc(y)?;
                let a = adv(y)?;
                Ok([0, 1, 2].map(|i| ut[i] - v[i] + a[i]))
            };
            stencil::curl(&momentum, x, dim, h)?
        };
        vals.push(norm3(r));
    }
    let (l2, linf) = point_norms(&vals);
    let mut meta = points_meta(points.len(), h);
    meta["t"] = json!(t);
    meta["family"] = json!(sol.family());
    meta["form"] = json!(if has_pressure { "pressure" } else { "curl" });
    Ok(ResidualReport::new("navier_stokes", l2, linf, scale, tol, meta))
}

/// Centered time derivative of a uniformly spaced series: fourth order with
/// two neighbours on each side, second order with one.
fn time_derivative(times: &[f64], series: &[GridField], index: usize) -> Result<(GridField, f64, usize)> {
    let n = series.len().min(times.len());
    if n < 3 || index == 0 || index + 1 >= n {
        return Err(Error::SeriesTooShort { needed: 3, got: n });
    }
    let dt = times[index + 1] - times[index];
    let uniform = |a: usize, b: usize| ((times[b] - times[a]) - dt).abs() <= 1e-9 * dt.abs();
    if !(dt > 0.0) || !uniform(index - 1, index) {
        return Err(Error::Config("time series must be uniformly spaced".into()));
    }
    if index >= 2 && index + 2 < n && uniform(index - 2, index - 1) && uniform(index + 1, index + 2) {
        let d = series[index - 2]
            .sub(&series[index - 1].scale(8.0))?
            .add(&series[index + 1].scale(8.0))?
            .sub(&series[index + 2])?
            .scale(1.0 / (12.0 * dt));
        Ok((d, dt, 4))
    } else {
        let d = series[index + 1].sub(&series[index - 1])?.scale(0.5 / dt);
        Ok((d, dt, 2))
    }
}

fn interior(times: &[f64], series: &[GridField]) -> Result<std::ops::Range<usize>> {
    let n = series.len().min(times.len());
    if n < 5 {
        return Err(Error::SeriesTooShort { needed: 5, got: n });
    }
    Ok(2..n - 2)
}

fn combine(check: &str, per: Vec<(f64, f64, f64)>, tol: f64, meta: serde_json::Value) -> ResidualReport {
    let k = per.len().max(1) as f64;
    let l2 = (per.iter().map(|p| p.0 * p.0).sum::<f64>() / k).sqrt();
    let linf = per.iter().fold(0.0f64, |m, p| m.max(p.1));
    let scale = per.iter().fold(0.0f64, |m, p| m.max(p.2));
    ResidualReport::new(check, l2, linf, scale, tol, meta)
}

/// `φ_t − νΔφ` over the interior of a scalar series (at least five snapshots).
pub fn residual_heat(times: &[f64], series: &[GridField], nu: f64, tol: f64) -> Result<ResidualReport> {
    let range = interior(times, series)?;
    let mut per = Vec::new();
    for i in range {
        let (ft, _, _) = time_derivative(times, series, i)?;
        let visc = diff(&series[i], DiffOp::Laplacian)?.scale(nu);
        let r = ft.sub(&visc)?;
        let (l2, linf) = grid_norms(&r);
        per.push((l2, linf, ft.pointwise_max_norm().max(visc.pointwise_max_norm())));
    }
    let mut meta = grid_meta(series[0].grid());
    meta["snapshots"] = json!(per.len());
    Ok(combine("heat", per, tol, meta))
}

/// `(a·∇) f` for every component of `f`, dealiased.
fn directional(grid: &Grid, a: &GridField, f: &GridField) -> GridField {
    let dim = grid.dim();
    let dealiased = |v: &[f64]| -> Vec<Complex64> {
        let mut h = to_hat(grid, v);
        dealias_hat(grid, &mut h);
        h
    };
    let av: Vec<Vec<f64>> = (0..dim).map(|c| to_real(grid, dealiased(a.component(c)))).collect();
    let mut data = Vec::with_capacity(f.components() * grid.len());
    for c in 0..f.components() {
        let fh = dealiased(f.component(c));
        let mut prod = vec![0.0; grid.len()];
        for (axis, ac) in av.iter().enumerate() {
            let d = to_real(grid, crate::grid::ops::d_hat(grid, &fh, axis));
            for ((p, &x), &y) in prod.iter_mut().zip(ac).zip(&d) {
                *p += x * y;
            }
        }
        let mut h = to_hat(grid, &prod);
        dealias_hat(grid, &mut h);
        data.extend(to_real(grid, h));
    }
    GridField::from_parts(*grid, f.components(), data)
}

/// `ω_t − νΔω + (u·∇)ω − (ω·∇)u`; in 2D the stretching term is absent and
/// `ω` is the scalar vorticity. Vorticity is taken from `u` when not given.
pub fn residual_vorticity(
    times: &[f64],
    velocity: &[GridField],
    vorticity: Option<&[GridField]>,
    nu: f64,
    tol: f64,
) -> Result<ResidualReport> {
    let range = interior(times, velocity)?;
    let omega: Vec<GridField> = match vorticity {
        Some(w) => {
            if w.len() < velocity.len() {
                return Err(Error::SeriesTooShort { needed: velocity.len(), got: w.len() });
            }
            w.to_vec()
        }
        None => velocity
            .iter()
            .map(|u| diff(u, DiffOp::Curl))
            .collect::<Result<_>>()?,
    };
    let mut per = Vec::new();
    for i in range {
        let u = &velocity[i];
        check_vector(u)?;
        let grid = *u.grid();
        let w = &omega[i];
        let (wt, _, _) = time_derivative(times, &omega, i)?;
        let visc = diff(w, DiffOp::Laplacian)?.scale(nu);
        let transport = directional(&grid, u, w);
        let mut r = wt.sub(&visc)?.add(&transport)?;
        let mut scale = visc.pointwise_max_norm() + transport.pointwise_max_norm();
        if grid.dim() == 3 {
            let stretch = directional(&grid, w, u);
            scale += stretch.pointwise_max_norm();
            r = r.sub(&stretch)?;
        }
        let (l2, linf) = grid_norms(&r);
        per.push((l2, linf, scale));
    }
    let mut meta = grid_meta(velocity[0].grid());
    meta["snapshots"] = json!(per.len());
    Ok(combine("vorticity", per, tol, meta))
}

/// Zero-mean pressure with `ΔP = −∇·((u·∇)u)`.
pub fn recover_pressure(u: &GridField) -> Result<GridField> {
    check_vector(u)?;
    let div = diff(u, DiffOp::Divergence)?.linf();
    let gs = gradient_scale(u)?;
    if div > SOLENOIDAL_TOL * gs {
        return Err(Error::NotSolenoidal(div / gs));
    }
    let rhs = diff(&advect(u)?, DiffOp::Divergence)?.scale(-1.0);
    // the zero mode of a divergence vanishes identically; remove rounding
    let m = rhs.mean(0);
    let rhs = GridField::new(*rhs.grid(), 1, rhs.data().iter().map(|v| v - m).collect())?;
    solve_poisson(&rhs)
}

/// `‖u‖²`
pub fn energy(u: &GridField) -> f64 {
    let l = u.l2();
    l * l
}

/// `‖∇u‖² = Σ_ij ‖∂_j u_i‖²` by Parseval.
pub fn gradient_energy(u: &GridField) -> f64 {
    let grid = u.grid();
    let mut acc = 0.0;
    for c in 0..u.components() {
        let h = to_hat(grid, u.component(c));
        for (i, z) in h.iter().enumerate() {
            let xi = grid.xi(i);
            acc += (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]) * z.norm_sqr();
        }
    }
    acc * grid.cell_volume() / grid.len() as f64
}

/// `E(t) = ‖u‖²`, `D(t) = 2ν∫₀ᵗ ‖∇u‖²` and `E + D − E(0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub dissipation: Vec<f64>,
    pub imbalance: Vec<f64>,
}

impl EnergyReport {
    /// From energies and gradient energies already tabulated in time.
    pub fn from_series(times: &[f64], energy: &[f64], gradient_energy: &[f64], nu: f64) -> Self {
        let n = times.len().min(energy.len()).min(gradient_energy.len());
        let mut dissipation = Vec::with_capacity(n);
        let mut d = 0.0;
        for i in 0..n {
            if i > 0 {
                d += 2.0 * nu * interval_integral(&times[..n], &gradient_energy[..n], i - 1);
            }
            dissipation.push(d);
        }
        let e0 = energy.first().copied().unwrap_or(0.0);
        let imbalance = (0..n).map(|i| energy[i] + dissipation[i] - e0).collect();
        EnergyReport {
            times: times[..n].to_vec(),
            energy: energy[..n].to_vec(),
            dissipation,
            imbalance,
        }
    }

    /// `max |E + D − E(0)| / E(0)` (absolute when `E(0) = 0`).
    pub fn max_relative_imbalance(&self) -> f64 {
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        let m = self.imbalance.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if e0 > 0.0 {
            m / e0
        } else {
            m
        }
    }

    /// CSV with header `t,E,D,imbalance`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,E,D,imbalance\n");
        for i in 0..self.times.len() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                self.times[i], self.energy[i], self.dissipation[i], self.imbalance[i]
            ));
        }
        s
    }
}

/// `∫` of the samples over `[t_i, t_{i+1}]`: exact for the cubic through the
/// four nearest samples, trapezoid when fewer than four exist.
fn interval_integral(t: &[f64], g: &[f64], i: usize) -> f64 {
    let (a, b) = (t[i], t[i + 1]);
    if t.len() < 4 {
        return 0.5 * (b - a) * (g[i] + g[i + 1]);
    }
    let lo = i.saturating_sub(1).min(t.len() - 4);
    let nodes = &t[lo..lo + 4];
    let vals = &g[lo..lo + 4];
    let lagrange = |x: f64| -> f64 {
        (0..4)
            .map(|j| {
                let w: f64 = (0..4).filter(|&k| k != j).map(|k| (x - nodes[k]) / (nodes[j] - nodes[k])).product();
                w * vals[j]
            })
            .sum()
    };
    // two-point Gauss–Legendre integrates cubics exactly
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    let z = h / 3f64.sqrt();
    h * (lagrange(m - z) + lagrange(m + z))
}

/// Energy balance of a velocity series.
pub fn energy_report(times: &[f64], series: &[GridField], nu: f64) -> EnergyReport {
    let e: Vec<f64> = series.iter().map(energy).collect();
    let g: Vec<f64> = series.iter().map(gradient_energy).collect();
    EnergyReport::from_series(times, &e, &g, nu)
}
