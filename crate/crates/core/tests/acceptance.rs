//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use sfns::catalog::{make_beltrami, make_poly_family, ExactSolution, Family, PolyCoeffs, PolyKind};
use sfns::config::VerifyConfig;
use sfns::evolve::{evolve_hm2d, SolverConfig};
use sfns::frames::{recover_potentials, synthesize, FrameVector, Potential, RepKind, SymplecticRep};
use sfns::grid::{advect, diff, DiffOp, Grid, GridField, SpectralField};
use sfns::radial::{chebyshev_radii, eval_derivatives, heat_evolve_radial, heat_quadrature, ode_residuals, OdeSystem, RadialProfile};
use sfns::symmetry::*;
use sfns::verify::stencil;
use sfns::verify::*;
use sfns::Error;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn max_rel(a: [f64; 3], b: [f64; 3], scale: f64) -> f64 {
    norm3([a[0] - b[0], a[1] - b[1], a[2] - b[2]]) / scale
}

fn beltrami_exactness() -> Outcome {
    let mut worst = [0.0f64; 3];
    let mut pass = true;
    for lambda in [1.0, 2.5] {
        let mut cfg = VerifyConfig::new(Family::Beltrami3D);
        cfg.lambda = lambda;
        cfg.alpha = 1.0;
        cfg.beta = 0.0;
        cfg.nu = 0.01;
        cfg.times = vec![0.0, 0.5];
        cfg.points = 1000;
        cfg.seed = 7;
        let sol = cfg.build_solution().unwrap();
        let pts = random_shell_points(1000, 0.1, 10.0, 3, 7);
        for t in [0.0, 0.5] {
            let st = sol.at(t).unwrap();
            let curl = residual_beltrami(&st, &pts, lambda, 1e-9).unwrap();
            let div = residual_divergence(FieldInput::Points { sampler: &st, points: &pts }, 1e-10).unwrap();
            let ns = residual_ns(NsInput::Exact { solution: &sol, t, points: &pts }, 0.01, 1e-8).unwrap();
            pass &= curl.passed && div.passed && ns.passed;
            worst[0] = worst[0].max(curl.relative());
            worst[1] = worst[1].max(div.relative());
            worst[2] = worst[2].max(ns.relative());
        }
    }
    outcome(
        pass,
        format!("curl {:.1e} (≤1e-9), div {:.1e} (≤1e-10), NS {:.1e} (≤1e-8)", worst[0], worst[1], worst[2]),
    )
}

fn ode_pair_certification() -> Outcome {
    let lam = 1.7;
    let phi = RadialProfile::sinc(lam, lam, 0.0);
    let psi = RadialProfile::sinc(lam, 1.0, 0.0);
    let radii = chebyshev_radii(64, 0.1, 20.0);
    let worst = |f: &RadialProfile, g: &RadialProfile| {
        radii
            .iter()
            .flat_map(|&r| ode_residuals(OdeSystem::Pair12, f, g, r).unwrap())
            .map(|res| res.relative())
            .fold(0.0, f64::max)
    };
    let good = worst(&phi, &psi);
    let bad = worst(&RadialProfile::poly(&[(2, 1.0)]), &RadialProfile::poly(&[(3, 1.0)]));
    outcome(good < 1e-10 && bad > 1e-2, format!("sinc pair {good:.1e} (<1e-10), (r², r³) {bad:.2e} (>1e-2)"))
}

fn hm2d_persistence(energy: &mut Vec<(String, f64)>) -> Outcome {
    let grid = Grid::new(2, 256, 2.0 * PI * 8.0).unwrap();
    let nu = 0.01;
    let p = RadialProfile::gaussian(1.0, 2.0);
    let radial = |prof: &RadialProfile| {
        let f = GridField::scalar_from_fn(grid, |x| prof.value((x[0] * x[0] + x[1] * x[1]).sqrt()).unwrap());
        let m = f.mean(0);
        GridField::scalar_from_fn(grid, |x| prof.value((x[0] * x[0] + x[1] * x[1]).sqrt()).unwrap() - m)
    };
    let phi0 = radial(&p);
    let cfg = SolverConfig::new(nu, 0.01, 1.0).with_snapshot_every(10);
    let run = evolve_hm2d(&phi0, &cfg).unwrap();
    energy.push(("planar run".into(), run.energy_report().max_relative_imbalance()));
    let radii = shell_radii(&grid, 16);
    let scale = phi0.linf();
    let (mut err, mut frac) = (0.0f64, 0.0f64);
    for s in &run.snapshots {
        let phi = s.field("phi").unwrap();
        let exact = radial(&heat_evolve_radial(&p, nu * s.t, 2).unwrap());
        err = err.max(phi.sub(&exact).unwrap().linf() / scale);
        frac = frac.max(angular_mode_fraction(phi, &radii, 128).unwrap());
    }
    outcome(
        err <= 1e-7 && frac <= 1e-8 && run.snapshots.len() == 11,
        format!("heat deviation {err:.1e} (≤1e-7), angular fraction {frac:.1e} (≤1e-8), {:.1}s", run.wall_time),
    )
}

fn heat_closed_forms() -> Outcome {
    let mut pass = true;
    let mut poly_err = 0.0f64;
    let mut sinc_err = 0.0f64;
    for tau in [0.01, 0.1] {
        let q = heat_evolve_radial(&RadialProfile::poly(&[(2, 1.0)]), tau, 3).unwrap();
        for r in [0.0, 0.3, 1.0, 4.0] {
            poly_err = poly_err.max((q.value(r).unwrap() - (r * r + 6.0 * tau)).abs());
        }
        let p = RadialProfile::sinc(1.3, 1.0, 0.0);
        let e = heat_evolve_radial(&p, tau, 3).unwrap();
        for k in 0..=50 {
            let r = 0.1 * k as f64;
            let a = e.value(r).unwrap();
            let b = heat_quadrature(&p, tau, 3, r).unwrap();
            sinc_err = sinc_err.max((a - b).abs() / p.value(0.0).unwrap().abs());
        }
    }
    pass &= poly_err < 1e-12 && sinc_err <= 1e-6;
    outcome(pass, format!("r² drift {poly_err:.1e}, sinc vs quadrature {sinc_err:.1e} (≤1e-6)"))
}

fn exceptional_statics() -> Outcome {
    let (e1, e2) = (FrameVector::e1(), FrameVector::e2());
    let a = FrameVector::new([0.3, -0.5, 1.0]).unwrap();
    let b = FrameVector::new([1.0, 0.4, -0.2]).unwrap();
    let statics: Vec<ExactSolution> = vec![
        make_poly_family(PolyKind::Poly12Perp, PolyCoeffs { f2: 1.0, g2: 0.5, ..Default::default() }, e1, e2, 0.0).unwrap(),
        make_poly_family(PolyKind::Poly12Perp, PolyCoeffs { g4: 0.5, g2: -1.0, ..Default::default() }, e1, e2, 0.0).unwrap(),
        make_poly_family(PolyKind::Poly11, PolyCoeffs { f2: 1.0, g2: -0.7, ..Default::default() }, a, b, 0.0).unwrap(),
        make_poly_family(PolyKind::Poly22, PolyCoeffs { f4: 1.0, f2: 0.5, g4: 2.0, g2: 1.0, ..Default::default() }, a, b, 0.0).unwrap(),
    ];
    let pts = random_shell_points(200, 0.1, 2.0, 3, 11);
    let mut worst = 0.0f64;
    let mut pass = true;
    for sol in &statics {
        let st = sol.at(0.0).unwrap();
        let r = residual_static_euler(FieldInput::Points { sampler: &st, points: &pts }, 1e-9).unwrap();
        pass &= r.passed;
        worst = worst.max(r.relative());
    }

    // Δ(φ_t − νΔφ) = 0 along the moving quartic family
    let nu = 0.2;
    let c = PolyCoeffs { f4: 1.0, f2: 0.5, g4: 2.0, g2: 1.0, ..Default::default() };
    let sol = make_poly_family(PolyKind::Poly22, c, a, b, nu).unwrap();
    let t = 0.7;
    let drift = |x: [f64; 3]| -> sfns::Result<[f64; 1]> {
        let r = norm3(x);
        // φ is affine in t, so a wide centered difference is exact
        let h = 0.25;
        let (sp, sm, s0) = (sol.at(t + h)?, sol.at(t - h)?, sol.at(t)?);
        let (fp, fm, f) = (sp.potentials().0, sm.potentials().0, s0.potentials().0);
        let phi_t = (fp.value(r)? - fm.value(r)?) / (2.0 * h);
        Ok([phi_t - nu * eval_derivatives(f, r, 3)?.lap])
    };
    let mut drift_worst = 0.0f64;
    for &x in pts.iter().take(50) {
        let lap = stencil::laplacian(&drift, x, 3, 0.05).unwrap()[0];
        let scale = nu * 120.0 * c.f4;
        drift_worst = drift_worst.max(lap.abs() / scale);
    }
    pass &= drift_worst <= 1e-9;

    let rejects_perp = matches!(
        make_poly_family(PolyKind::Poly12Perp, PolyCoeffs { f2: 1.0, g4: 1.0, ..Default::default() }, e1, e2, 0.0),
        Err(Error::Predicate(_))
    );
    let rejects_22 = matches!(
        make_poly_family(PolyKind::Poly22, PolyCoeffs { f2: 1.0, g4: 1.0, f4: 1.0, g2: 2.0, ..Default::default() }, a, b, 0.0),
        Err(Error::Predicate(_))
    );
    pass &= rejects_perp && rejects_22;
    outcome(
        pass,
        format!(
            "static residual {worst:.1e} (≤1e-9), quartic drift {drift_worst:.1e} (≤1e-9), predicates rejected: {rejects_perp}/{rejects_22}"
        ),
    )
}

fn breaking_configs() -> (ExperimentConfig, ExperimentConfig) {
    let lam = 2.0;
    let alpha = 0.015;
    let persist = ExperimentConfig {
        rep: RepKind::Rep12,
        frames: Frames { a: FrameVector::e3(), b: FrameVector::e3() },
        phi0: RadialProfile::sinc(lam, lam * alpha, 0.0),
        psi0: RadialProfile::sinc(lam, alpha, 0.0),
        grid: GridSpec { n: 48, length: 4.0 * PI },
        solver: SolverConfig::new(0.05, 0.01, 0.5).with_snapshot_every(10),
        thresholds: Thresholds::default(),
        anisotropy: AnisotropyOptions::default(),
        cutoff: Some(Cutoff::at(0.3, 0.05)),
    };
    let brk = ExperimentConfig {
        rep: RepKind::Rep22,
        frames: Frames { a: FrameVector::e1(), b: FrameVector::e2() },
        phi0: RadialProfile::gaussian(0.02, 1.0),
        psi0: RadialProfile::zero(),
        grid: GridSpec { n: 48, length: 10.0 },
        cutoff: None,
        ..persist.clone()
    };
    (persist, brk)
}

fn breaking_experiment(energy: &mut Vec<(String, f64)>) -> Outcome {
    let start = Instant::now();
    let (persist, brk) = breaking_configs();
    let p = run_symmetry_experiment(&persist).unwrap();
    let b = run_symmetry_experiment(&brk).unwrap();
    energy.push(("persist run".into(), p.run.energy_report().max_relative_imbalance()));
    energy.push(("break run".into(), b.run.energy_report().max_relative_imbalance()));
    let p_ok = p.verdict == Verdict::Persist && p.max_global() <= 3.0 * p.baseline();
    let b_ok = b.verdict == Verdict::Break && b.max_global() > 10.0 * b.baseline() && b.max_global() > 1e-3;
    let predicted = p.prediction.predicted == Prediction::Persist && b.prediction.predicted == Prediction::Break;
    outcome(
        p_ok && b_ok && predicted && start.elapsed().as_secs() < 600,
        format!(
            "persist {:.2e}/{:.2e} = {:.2}× (≤3×), break {:.2e}/{:.2e} = {:.1}× (>10×, >1e-3), {:.0}s",
            p.max_global(),
            p.baseline(),
            p.max_global() / p.baseline(),
            b.max_global(),
            b.baseline(),
            b.max_global() / b.baseline(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn energy_balance(energy: &mut Vec<(String, f64)>) -> Outcome {
    let grid = Grid::new(3, 32, 2.0 * PI).unwrap();
    let abc = GridField::vector_from_fn(grid, |x| {
        [x[2].sin() + 0.8 * x[1].cos(), 0.6 * x[0].sin() + x[2].cos(), 0.8 * x[1].sin() + 0.6 * x[0].cos()]
    });
    let run = sfns::evolve::evolve_ns3d(&abc, &SolverConfig::new(0.05, 0.01, 0.5)).unwrap();
    energy.push(("ABC run".into(), run.energy_report().max_relative_imbalance()));
    let worst = energy.iter().map(|(_, e)| *e).fold(0.0, f64::max);
    let list: Vec<String> = energy.iter().map(|(n, e)| format!("{n} {e:.1e}")).collect();
    outcome(worst <= 1e-6, format!("{} (≤1e-6)", list.join(", ")))
}

/// `f` with the flagged Fourier modes removed.
fn off_killed(f: &GridField, killed: &[bool]) -> GridField {
    let mut hat = SpectralField::forward(f);
    for c in 0..hat.components() {
        for (z, &k) in hat.component_mut(c).iter_mut().zip(killed) {
            if k {
                *z = Default::default();
            }
        }
    }
    hat.to_grid()
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let h = 0.02;

    // closed-form curl and advection against difference quotients of the velocity
    let sol = make_beltrami(1.3, 1.0, 0.4, FrameVector::new([0.2, 1.0, -0.5]).unwrap(), 0.0).unwrap();
    let st = sol.at(0.0).unwrap();
    let pts = random_shell_points(100, 0.5, 4.0, 3, 3);
    let vel = |x: [f64; 3]| st.velocity(x);
    for &x in &pts {
        let u = st.velocity(x).unwrap();
        let j = stencil::jacobian(&vel, x, 3, h).unwrap();
        let w_fd = stencil::curl_of(&j);
        let adv_fd = [0, 1, 2].map(|i| j[i][0] * u[0] + j[i][1] * u[1] + j[i][2] * u[2]);
        let w = st.vorticity(x).unwrap();
        let adv = st.advection(x).unwrap();
        worst = worst.max(max_rel(w, w_fd, norm3(w).max(1e-3)));
        worst = worst.max(max_rel(adv, adv_fd, norm3(adv).max(1e-3)));
    }

    // radial derivative evaluators
    for p in [RadialProfile::gaussian(1.0, 1.3), RadialProfile::sinc(1.1, 1.0, 0.0), RadialProfile::poly(&[(2, 0.5), (4, 1.0)])] {
        for r in [0.4, 1.0, 2.2] {
            let d = eval_derivatives(&p, r, 3).unwrap();
            let f = |x: [f64; 3]| p.value(x[0]).map(|v| [v]);
            let d1 = stencil::derivative(&f, [r, 0.0, 0.0], 0, 1e-2).unwrap()[0];
            let q = |x: [f64; 3]| eval_derivatives(&p, x[0], 3).map(|e| [e.q1, e.lap]);
            let dq = stencil::derivative(&q, [r, 0.0, 0.0], 0, 1e-2).unwrap();
            let g = |x: [f64; 3]| p.value(norm3(x)).map(|v| [v]);
            let lap = stencil::laplacian(&g, [r / 3f64.sqrt(); 3], 3, 1e-2).unwrap()[0];
            for (a, b) in [(d.d1, d1), (d.dq1, dq[0]), (d.dlap, dq[1]), (d.lap, lap)] {
                worst = worst.max((a - b).abs() / a.abs().max(1e-3));
            }
        }
    }

    // spectral advection and curl on a smooth periodic field
    let grid = Grid::new(3, 32, 2.0 * PI).unwrap();
    let field = |x: [f64; 3]| [x[1].sin() * x[2].cos(), (x[0] + x[2]).cos(), (2.0 * x[0]).sin() * x[1].cos()];
    let u = GridField::vector_from_fn(grid, field);
    let adv = advect(&u).unwrap();
    let curl = diff(&u, DiffOp::Curl).unwrap();
    let fd = |x: [f64; 3]| Ok(field(x));
    for i in (0..grid.len()).step_by(97) {
        let x = grid.point(i);
        let j = stencil::jacobian(&fd, x, 3, h).unwrap();
        let uv = field(x);
        let a_fd = [0, 1, 2].map(|r| j[r][0] * uv[0] + j[r][1] * uv[1] + j[r][2] * uv[2]);
        worst = worst.max(max_rel(adv.vector_at(i), a_fd, adv.pointwise_max_norm()));
        worst = worst.max(max_rel(curl.vector_at(i), stencil::curl_of(&j), curl.pointwise_max_norm()));
    }

    // potential recovery followed by synthesis
    let grid = Grid::new(3, 16, 2.0 * PI).unwrap();
    let phi = GridField::scalar_from_fn(grid, |x| (x[0] + 2.0 * x[1]).sin() + 0.5 * (x[2] - x[0]).cos() + 0.2 * x[1].cos());
    let psi = GridField::scalar_from_fn(grid, |x| (x[1] - x[2]).cos() + 0.3 * (2.0 * x[2]).sin() + 0.4 * x[0].sin());
    let mut round = 0.0f64;
    let generic = (FrameVector::new([1.0, 0.42, -0.35]).unwrap(), FrameVector::new([-0.22, 1.0, 1.85]).unwrap());
    let cases = [
        (RepKind::Rep11, generic),
        (RepKind::Rep22, generic),
        (RepKind::Rep12, (FrameVector::e3(), FrameVector::e3())),
        (RepKind::Rep12, (FrameVector::e3(), FrameVector::e1())),
    ];
    for (kind, (a, b)) in cases {
        let rep = SymplecticRep::new(kind, a, b, Potential::Grid(phi.clone()), Potential::Grid(psi.clone())).unwrap();
        let u = synthesize(&rep).unwrap();
        let rec = recover_potentials(&u, None, kind, a, b).unwrap();
        let killed: Vec<bool> = rec.killed_modes_phi().iter().zip(rec.killed_modes_psi()).map(|(p, q)| *p || *q).collect();
        let back = SymplecticRep::new(kind, a, b, Potential::Grid(rec.phi), Potential::Grid(rec.psi)).unwrap();
        let v = synthesize(&back).unwrap();
        let (u, v) = (off_killed(&u, &killed), off_killed(&v, &killed));
        round = round.max(v.sub(&u).unwrap().pointwise_max_norm() / u.pointwise_max_norm());
    }
    outcome(
        worst <= 1e-6 && round <= 1e-8,
        format!("FD oracles {worst:.1e} (≤1e-6), recovery round trip {round:.1e} (≤1e-8)"),
    )
}

fn main() {
    let mut energy = Vec::new();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!("{} {name}: {} [{:.1}s]", if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed().as_secs_f64());
        results.push((name, o));
    };
    run("1 beltrami exactness", &mut beltrami_exactness);
    run("2 radial ODE pair", &mut ode_pair_certification);
    run("3 planar persistence", &mut || hm2d_persistence(&mut energy));
    run("4 heat closed forms", &mut heat_closed_forms);
    run("5 exceptional statics", &mut exceptional_statics);
    run("6 breaking dichotomy", &mut || breaking_experiment(&mut energy));
    run("7 energy balance", &mut || energy_balance(&mut energy));
    run("8 oracle equivalence", &mut oracle_equivalence);
    let failed: Vec<&str> = results.iter().filter(|(_, o)| !o.pass).map(|(n, _)| *n).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
    } else {
        println!("acceptance: failed {failed:?}");
        std::process::exit(1);
    }
}
