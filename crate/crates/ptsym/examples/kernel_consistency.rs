//! Numerical C matrix of `p^2 + x^2 + i eps x^3` against the first-order kernel.

use ptsym::spectral::kernel_consistency;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = kernel_consistency(&[0.02, 0.04, 0.08], 60, 4, 1)?;
    for (e, d) in k.eps.iter().zip(&k.deviation) {
        println!("eps = {e:.2}: max deviation {d:.3e}");
    }
    println!("log-log slope {:.3}", k.slope);
    Ok(())
}
