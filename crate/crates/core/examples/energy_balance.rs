//! Energy identity of the 3D solver on an ABC flow and on random data.
//!
//! `cargo run --release --example energy_balance -- 32`

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use sfns::evolve::{evolve_ns3d, SolverConfig};
use sfns::grid::{leray_project, Grid, GridField};

fn main() -> sfns::Result<()> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse().expect("grid size")).unwrap_or(32);
    let grid = Grid::new(3, n, 2.0 * PI)?;
    let cfg = SolverConfig::new(0.05, 0.01, 0.5).with_snapshot_every(10);

    let abc = GridField::vector_from_fn(grid, |x| {
        [x[2].sin() + 0.8 * x[1].cos(), 0.6 * x[0].sin() + x[2].cos(), 0.8 * x[1].sin() + 0.6 * x[0].cos()]
    });
    let run = evolve_ns3d(&abc, &cfg)?;
    println!("ABC flow: max relative imbalance {:.2e}", run.energy_report().max_relative_imbalance());

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let modes: Vec<([f64; 3], [f64; 3], f64)> = (0..12)
        .map(|_| {
            let k = [0; 3].map(|_: i32| rng.gen_range(-3i32..=3) as f64);
            let c = [0; 3].map(|_: i32| rng.gen_range(-0.5..0.5));
            (k, c, rng.gen_range(0.0..6.3))
        })
        .collect();
    let raw = GridField::vector_from_fn(grid, |x| {
        let mut v = [0.0; 3];
        for (k, c, p) in &modes {
            let s = (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + p).sin();
            for i in 0..3 {
                v[i] += c[i] * s;
            }
        }
        v
    });
    let u0 = leray_project(&raw)?;
    let run = evolve_ns3d(&u0, &cfg)?;
    print!("{}", run.energy_report().to_csv());
    Ok(())
}
