//! Residuals of the reduced radial systems and the persistence prediction
//! derived from them.
//!
//! `cargo run --example radial_odes`

use sfns::frames::{Rep12Mode, RepKind};
use sfns::radial::{chebyshev_radii, coupling_integral, ode_residuals, CouplingSide, OdeSystem, RadialProfile};
use sfns::symmetry::predict_breaking;

fn worst(system: OdeSystem, phi: &RadialProfile, psi: &RadialProfile) -> sfns::Result<f64> {
    let mut w = 0.0f64;
    for r in chebyshev_radii(64, 0.1, 20.0) {
        for res in ode_residuals(system, phi, psi, r)? {
            w = w.max(res.relative());
        }
    }
    Ok(w)
}

fn main() -> sfns::Result<()> {
    let lam = 1.7;
    let cases = [
        ("sinc pair (λΨ, Ψ)", OdeSystem::Pair12, RadialProfile::sinc(lam, lam, 0.0), RadialProfile::sinc(lam, 1.0, 0.0)),
        ("(r², r³)", OdeSystem::Pair12, RadialProfile::poly(&[(2, 1.0)]), RadialProfile::poly(&[(3, 1.0)])),
        ("quadratics", OdeSystem::Constraints11, RadialProfile::poly(&[(2, 1.0)]), RadialProfile::poly(&[(2, -0.5)])),
        ("quartics 1:2", OdeSystem::Constraints22, RadialProfile::poly(&[(4, 1.0), (2, 0.5)]), RadialProfile::poly(&[(4, 2.0), (2, 1.0)])),
        ("gaussians", OdeSystem::Constraints22, RadialProfile::gaussian(1.0, 1.0), RadialProfile::gaussian(0.5, 2.0)),
    ];
    for (name, system, phi, psi) in &cases {
        println!("{name:<20} {system:?}: max relative residual {:.2e}", worst(*system, phi, psi)?);
    }

    // integrated form of the aligned pair
    let (phi, psi) = (&cases[0].2, &cases[0].3);
    for r in [0.5, 2.0, 8.0] {
        let a = coupling_integral(phi, psi, r, CouplingSide::PhiSide)?;
        let b = coupling_integral(phi, psi, r, CouplingSide::PsiSide)?;
        println!("coupling integrals at r = {r}: {a:.3e}, {b:.3e}");
    }

    let aligned = Some(Rep12Mode::Aligned);
    for (kind, mode, name, phi, psi) in [
        (RepKind::Rep12, aligned, "sinc pair", &cases[0].2, &cases[0].3),
        (RepKind::Rep12, aligned, "(r², r³)", &cases[1].2, &cases[1].3),
        (RepKind::Rep22, None, "quartics 1:2", &cases[3].2, &cases[3].3),
        (RepKind::Rep22, None, "gaussians", &cases[4].2, &cases[4].3),
    ] {
        let p = predict_breaking(kind, mode, phi, psi, None)?;
        println!("{kind:?} {name:<14} -> {:?} (exceptional family: {})", p.predicted, p.exceptional_family_match.as_deref().unwrap_or("none"));
    }
    Ok(())
}
