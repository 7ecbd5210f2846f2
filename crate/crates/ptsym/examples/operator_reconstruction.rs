//! Parity, Hamiltonian, Green function and C rebuilt from the retained eigenvectors of `p^2 + i x^3`.

use ptsym::spectral::reconstruct::project_function;
use ptsym::spectral::{completeness_residual, diagonalize, numeric_c_matrix, reconstruct_operators, HamiltonianFamily};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let res = diagonalize(HamiltonianFamily::Epsilon { eps: 1.0 }, 200)?;
    let m = res.retained();
    let rec = reconstruct_operators(&res, m)?;
    println!("{m} retained levels");
    println!("  |P^2 - 1|       {:.3e}", rec.parity_residual);
    println!("  |H_M - H|       {:.3e}", rec.hamiltonian_residual);
    println!("  |H G - 1|       {:.3e}", rec.green_residual);
    let c = numeric_c_matrix(&res, m, 200, 7)?;
    println!("  |C^2 - 1|       {:.3e}", c.c_squared_residual);
    println!("  |[C, H]|        {:.3e}", c.commutator_residual);
    println!("  min CPT norm    {:.3e}", c.min_cpt_product);
    for (name, f) in [("gaussian", (|x: f64| (-x * x / 2.0).exp()) as fn(f64) -> f64), ("x e^{-x^2}", |x: f64| x * (-x * x).exp())] {
        println!("  completeness on {name}: {:.3e}", completeness_residual(&res, &project_function(&res, f), m, &[-2.0, -1.0, 0.0, 1.0, 2.0])?);
    }
    Ok(())
}
