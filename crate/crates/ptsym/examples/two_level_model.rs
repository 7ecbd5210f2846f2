//! The 2x2 PT-symmetric Hamiltonian: phases, C matrix and CPT-norm conservation.

use num_complex::Complex64;
use ptsym::matrix_model::{solve, TwoLevelModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (r, s, theta) in [(1.0, 2.0, 0.9), (1.0, 1.0, std::f64::consts::FRAC_PI_2), (1.0, 0.5, 1.2)] {
        let sol = solve(TwoLevelModel::new(r, s, theta));
        println!("r={r} s={s} theta={theta:.3}: {:?}, E = {:.4}, {:.4}", sol.phase, sol.eigenvalues[0], sol.eigenvalues[1]);
        if sol.c_matrix.is_some() {
            let psi = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
            for t in [0.0, 1.0, 5.0] {
                let v = sol.evolve(&psi, t);
                println!("  t={t}: <psi|psi>_CPT = {:.12}", sol.cpt_inner(&v, &v)?.re);
            }
        }
    }
    Ok(())
}
