//! The radial heat semigroup: closed forms against kernel quadrature.
//!
//! `cargo run --example heat_kernel`

use sfns::radial::{heat_evolve_radial, heat_quadrature, RadialProfile};

fn main() -> sfns::Result<()> {
    let profiles = [
        ("r²", RadialProfile::poly(&[(2, 1.0)])),
        ("r⁴ + r²", RadialProfile::poly(&[(4, 1.0), (2, 1.0)])),
        ("sinc λ=1.3", RadialProfile::sinc(1.3, 1.0, 0.0)),
        ("gaussian", RadialProfile::gaussian(1.0, 1.0)),
        ("bump Ra=1", RadialProfile::bump(1.0, 1.0)),
    ];
    for tau in [0.01, 0.1] {
        println!("τ = νt = {tau}");
        for (name, p) in &profiles {
            let e = heat_evolve_radial(p, tau, 3)?;
            let mut worst = 0.0f64;
            // numerically convolved profiles are tabulated on a finite range
            let r_max = e.valid_range().1.min(5.0);
            for k in 0..=25 {
                let r = r_max * k as f64 / 25.0;
                worst = worst.max((e.value(r)? - heat_quadrature(p, tau, 3, r)?).abs());
            }
            println!("  {name:<12} e^(τΔ)p(0) = {:>10.6}   max |closed − quadrature| up to r = 5 = {worst:.2e}", e.value(0.0)?);
        }
    }
    // the quadratic gains exactly 6τ in three dimensions
    let q = heat_evolve_radial(&RadialProfile::poly(&[(2, 1.0)]), 0.25, 3)?;
    println!("r² after τ = 0.25: value at 0 = {}", q.value(0.0)?);
    Ok(())
}
