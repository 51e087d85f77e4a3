//! Planar stationary Euler flows built from radial stream functions.
//!
//! `cargo run --example static_euler_2d`

use sfns::catalog::{make_static_euler_2d, StaticKind};
use sfns::verify::{random_shell_points, residual_divergence, residual_ns, residual_static_euler, FieldInput, NsInput};

fn main() -> sfns::Result<()> {
    let flows = [
        ("compact bump, Ra = 1", StaticKind::Bump { amplitude: 1.0, ra: 1.0, template: Default::default() }, 0.05, 2.0),
        ("compact bump, Ra = 3", StaticKind::Bump { amplitude: 0.5, ra: 3.0, template: Default::default() }, 0.05, 6.0),
        (
            "annulus sin(2r)",
            StaticKind::Periodic { j: 2.0, alpha: 1.0, beta: 0.5, r_min: 1.0, r_max: 5.0 },
            1.1,
            4.9,
        ),
    ];
    for (name, kind, lo, hi) in flows {
        let sol = make_static_euler_2d(kind)?;
        let pts = random_shell_points(500, lo, hi, 2, 3);
        let st = sol.at(0.0)?;
        let div = residual_divergence(FieldInput::Points { sampler: &st, points: &pts }, 1e-10)?;
        let stat = residual_static_euler(FieldInput::Points { sampler: &st, points: &pts }, 1e-9)?;
        let ns = residual_ns(NsInput::Exact { solution: &sol, t: 0.0, points: &pts }, 0.0, 1e-8)?;
        println!(
            "{name:<22} div {:.2e}  curl-advection {:.2e}  Euler {:.2e}",
            div.relative(),
            stat.relative(),
            ns.relative()
        );
    }
    Ok(())
}
