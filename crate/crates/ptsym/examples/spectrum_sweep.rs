//! Real levels of `p^2 + x^2 (i x)^eps` across the unbroken and broken regions.

use ptsym::spectral::{diagonalize, HamiltonianFamily};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for eps in [-0.5, -0.2, 0.0, 0.5, 1.0, 1.5] {
        let res = diagonalize(HamiltonianFamily::Epsilon { eps }, 200)?;
        let shown: Vec<String> = res
            .levels
            .iter()
            .filter(|l| l.converged)
            .take(6)
            .map(|l| if l.real { format!("{:.5}", l.energy.re) } else { format!("{:.4}{:+.4}i", l.energy.re, l.energy.im) })
            .collect();
        println!("eps = {eps:+.1}  retained {:>3}  {}", res.retained(), shown.join("  "));
    }
    Ok(())
}
