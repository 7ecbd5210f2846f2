//! Weak-coupling binding energies of the conventional and PT-symmetric quartic oscillators.

use ptsym::closed_forms::{binding_energy, thresholds, AnharmonicParams, QuarticModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = AnharmonicParams::new(1.0, 0.04)?;
    for model in [QuarticModel::Conventional, QuarticModel::PtSymmetric] {
        println!("{model:?}");
        for k in 2..=5 {
            let b = binding_energy(&params, k, model)?;
            println!("  k={k}: B = {:.6}  (B - kM)/M = {:+.6}  bound: {}", b.energy, b.ratio, b.is_bound());
        }
    }
    println!("two-particle state unbinds near nu = {}", thresholds::TWO_PARTICLE_UNBINDS);
    for (k, nu) in thresholds::K_PARTICLE_UNBINDS {
        println!("{k}-particle state unbinds near nu = {nu}");
    }
    Ok(())
}
