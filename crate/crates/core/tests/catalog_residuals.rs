use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfns::catalog::*;
use sfns::frames::FrameVector;
use sfns::radial::RadialProfile;
use sfns::verify::*;

fn ball_points(n: usize, r_lo: f64, r_hi: f64, dim: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut x = [0.0; 3];
        for v in x.iter_mut().take(dim) {
            *v = rng.gen_range(-r_hi..r_hi);
        }
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r >= r_lo && r <= r_hi {
            out.push(x);
        }
    }
    out
}

fn all_solutions() -> Vec<ExactSolution> {
    let a = FrameVector::new([0.3, -0.5, 1.0]).unwrap();
    let e1 = FrameVector::e1();
    let e2 = FrameVector::e2();
    let b = FrameVector::new([1.0, 0.4, -0.2]).unwrap();
    vec![
        make_beltrami(2.0, 1.0, 0.0, a, 0.01).unwrap(),
        make_poly_family(PolyKind::Poly12Perp, PolyCoeffs { f2: 1.0, g2: 1.0, ..Default::default() }, e1, e2, 0.0).unwrap(),
        make_poly_family(PolyKind::Poly12Perp, PolyCoeffs { g4: 0.5, g2: -1.0, ..Default::default() }, e1, e2, 0.05).unwrap(),
        make_poly_family(PolyKind::Poly11, PolyCoeffs { f2: 1.0, g2: 1.0, ..Default::default() }, a, b, 0.1).unwrap(),
        make_poly_family(PolyKind::Poly22, PolyCoeffs { f4: 1.0, f2: 0.5, g4: 2.0, g2: 1.0, ..Default::default() }, a, b, 0.1).unwrap(),
        make_static_euler_2d(StaticKind::Bump { amplitude: 1.0, ra: 1.0, template: Default::default() }).unwrap(),
        make_heat_2d(RadialProfile::gaussian(1.0, 1.0), 0.05).unwrap(),
        make_radial_pair12(RadialProfile::sinc(1.5, 1.5, 0.0), RadialProfile::sinc(1.5, 1.0, 0.0), b, 0.02, 0.1, 20.0).unwrap(),
    ]
}

#[test]
fn every_family_is_solenoidal() {
    for sol in all_solutions() {
        let pts = ball_points(200, 0.1, 2.0, sol.dim(), 1);
        let st = sol.at(0.3).unwrap();
        let r = residual_divergence(FieldInput::Points { sampler: &st, points: &pts }, 1e-10).unwrap();
        assert!(r.passed, "{} {:?}", sol.family(), r);
    }
}

#[test]
fn every_family_solves_navier_stokes_pointwise() {
    for sol in all_solutions() {
        let pts = ball_points(100, 0.1, 2.0, sol.dim(), 2);
        for t in [0.0, 0.4] {
            let r = residual_ns(NsInput::Exact { solution: &sol, t, points: &pts }, sol.nu(), 1e-8).unwrap();
            assert!(r.passed, "{} t={t} {:?}", sol.family(), r);
        }
    }
}

#[test]
fn every_static_snapshot_passes_curl_form() {
    for sol in all_solutions() {
        let pts = ball_points(100, 0.1, 2.0, sol.dim(), 3);
        let st = sol.at(0.2).unwrap();
        let r = residual_static_euler(FieldInput::Points { sampler: &st, points: &pts }, 1e-9).unwrap();
        assert!(r.passed, "{} {:?}", sol.family(), r);
    }
}

#[test]
fn periodic_annulus_is_static() {
    let sol = make_static_euler_2d(StaticKind::Periodic { j: 3.0, alpha: 1.0, beta: 0.0, r_min: 0.5, r_max: 10.0 }).unwrap();
    let pts = ball_points(200, 0.7, 9.5, 2, 4);
    let st = sol.at(0.0).unwrap();
    let r = residual_static_euler(FieldInput::Points { sampler: &st, points: &pts }, 1e-8).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn perturbed_solutions_are_caught() {
    let sol = make_beltrami(1.0, 1.0, 0.0, FrameVector::e3(), 0.0).unwrap();
    let st = sol.at(0.0).unwrap();
    let bad = FnSampler {
        dim: 3,
        f: |x: [f64; 3]| {
            let u = st.velocity(x).unwrap();
            [u[0] + 1e-3 * x[1].sin(), u[1] + 1e-3 * x[2].sin(), u[2]]
        },
    };
    let pts = ball_points(100, 0.1, 3.0, 3, 5);
    let r = residual_static_euler(FieldInput::Points { sampler: &bad, points: &pts }, 1e-9).unwrap();
    assert!(r.relative() > 1e-4, "{r:?}");
}
