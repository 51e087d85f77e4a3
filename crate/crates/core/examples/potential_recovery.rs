//! Synthesize a velocity from two potentials, then recover them.
//!
//! `cargo run --example potential_recovery`

use std::f64::consts::PI;

use sfns::frames::{recover_potentials, synthesize, FrameVector, Potential, RepKind, SymplecticRep};
use sfns::grid::{diff, DiffOp, Grid, GridField};

fn main() -> sfns::Result<()> {
    let grid = Grid::new(3, 24, 2.0 * PI)?;
    let phi = GridField::scalar_from_fn(grid, |x| (x[0] + 2.0 * x[1]).sin() + 0.5 * (x[2] - x[0]).cos());
    let psi = GridField::scalar_from_fn(grid, |x| (x[1] - x[2]).cos() + 0.3 * (2.0 * x[2]).sin() + 0.4 * x[0].sin());
    let a = FrameVector::new([1.0, 0.42, -0.35])?;
    let b = FrameVector::new([-0.22, 1.0, 1.85])?;

    for (kind, a, b) in [
        (RepKind::Rep11, a, b),
        (RepKind::Rep22, a, b),
        (RepKind::Rep12, FrameVector::e3(), FrameVector::e3()),
        (RepKind::Rep12, FrameVector::e3(), FrameVector::e1()),
    ] {
        let rep = SymplecticRep::new(kind, a, b, Potential::Grid(phi.clone()), Potential::Grid(psi.clone()))?;
        let u = synthesize(&rep)?;
        let div = diff(&u, DiffOp::Divergence)?.linf();
        let rec = recover_potentials(&u, None, kind, a, b)?;
        let again = synthesize(&SymplecticRep::new(kind, a, b, Potential::Grid(rec.phi.clone()), Potential::Grid(rec.psi.clone()))?)?;
        println!(
            "{kind:?} {:?}: |∇·u|∞ {div:.1e}, φ error {:.1e}, ψ error {:.1e}, resynthesis {:.1e}, killed share φ {:.1e} ψ {:.1e}",
            rep.mode(),
            rec.phi.sub(&phi)?.linf() / phi.linf(),
            rec.psi.sub(&psi)?.linf() / psi.linf(),
            again.sub(&u)?.linf() / u.linf(),
            rec.killed.phi,
            rec.killed.psi,
        );
    }
    Ok(())
}
