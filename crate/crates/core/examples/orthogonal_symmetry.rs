//! Orthogonal conjugation of grid fields: radial scalars are invariant,
//! anisotropic ones are not.
//!
//! `cargo run --release --example orthogonal_symmetry`

use sfns::frames::FrameVector;
use sfns::grid::interp::Interpolation;
use sfns::grid::{Grid, GridField};
use sfns::symmetry::{anisotropy_profile, orthogonal_conjugate, AnisotropyOptions, Orthogonal};

fn main() -> sfns::Result<()> {
    let grid = Grid::new(3, 32, 10.0)?;
    let r2 = |x: [f64; 3]| x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    let radial = GridField::scalar_from_fn(grid, |x| (-r2(x)).exp());
    let tilted = GridField::scalar_from_fn(grid, |x| (1.0 + 0.5 * x[2]) * (-r2(x)).exp());

    let maps = [
        ("cyclic", Orthogonal::cyclic()),
        ("quarter turn about e1", Orthogonal::quarter_turn_about(FrameVector::e1())),
        ("reflection", Orthogonal::reflection_fixing(FrameVector::e1(), FrameVector::e2())?),
    ];
    let inner = |f: &GridField, g: &GridField| {
        let mut m = 0.0f64;
        for i in 0..grid.len() {
            let x = grid.point(i);
            if r2(x).sqrt() <= 0.45 * grid.length() {
                m = m.max((f.data()[i] - g.data()[i]).abs());
            }
        }
        m
    };
    for (name, q) in &maps {
        let a = orthogonal_conjugate(&radial, q, Interpolation::Spectral)?;
        let b = orthogonal_conjugate(&tilted, q, Interpolation::Spectral)?;
        println!("{name:<24} radial change {:.2e}, tilted change {:.2e}", inner(&a, &radial), inner(&b, &tilted));
    }
    let opts = AnisotropyOptions::default();
    println!("anisotropy: radial {:.2e}, tilted {:.2e}", anisotropy_profile(&radial, opts)?.global, anisotropy_profile(&tilted, opts)?.global);
    Ok(())
}
