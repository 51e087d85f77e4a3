//! Pointwise checks of the decaying Beltrami family.
//!
//! `cargo run --release --example beltrami_check -- 2.5`

use sfns::catalog::make_beltrami;
use sfns::frames::FrameVector;
use sfns::verify::{random_shell_points, residual_beltrami, residual_divergence, residual_ns, FieldInput, NsInput};

fn main() -> sfns::Result<()> {
    let lambda: f64 = std::env::args().nth(1).map(|s| s.parse().expect("lambda")).unwrap_or(1.0);
    let nu = 0.01;
    let sol = make_beltrami(lambda, 1.0, 0.0, FrameVector::e3(), nu)?;
    let pts = random_shell_points(1000, 0.1, 10.0, 3, 7);

    println!("check          t     relative   tol      passed");
    for t in [0.0, 0.5, 2.0] {
        let st = sol.at(t)?;
        let reports = [
            residual_divergence(FieldInput::Points { sampler: &st, points: &pts }, 1e-10)?,
            residual_beltrami(&st, &pts, lambda, 1e-9)?,
            residual_ns(NsInput::Exact { solution: &sol, t, points: &pts }, nu, 1e-8)?,
        ];
        for r in reports {
            println!("{:<14} {t:<5} {:.3e}  {:.0e}    {}", r.check, r.relative(), r.tol, r.passed);
        }
    }
    // the field decays like exp(-ν λ² t)
    let x = [0.7, -0.2, 1.1];
    let u0 = sol.at(0.0)?.velocity(x)?;
    let u1 = sol.at(1.0)?.velocity(x)?;
    println!("u(1)/u(0) = {:.12}, exp(-ν λ²) = {:.12}", u1[0] / u0[0], (-nu * lambda * lambda).exp());
    Ok(())
}
