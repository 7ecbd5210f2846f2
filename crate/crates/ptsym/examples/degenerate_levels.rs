//! Second-order splitting of the degenerate levels of the `i eps xyz` oscillator.

use ptsym::perturbation::degenerate::{degenerate_block, even_class};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for level in [2u32, 4, 6] {
        let blk = degenerate_block(level, Some(&even_class(level)))?;
        println!("level {level}, {} all-even states", blk.basis.len());
        println!("  det(B - W) = {}", blk.char_poly);
        for r in &blk.roots {
            println!("  B = {:<24} x{}  ({:.6})", r.value.to_string(), r.multiplicity, r.value.midpoint());
        }
        let full = degenerate_block(level, None)?;
        println!("  full level: {} states, {} sub-blocks, {} complex roots", full.basis.len(), full.factors.len(), full.complex_roots);
        for r in &full.roots {
            println!("    B = {:<24} x{}", format!("{:.6}", r.value.midpoint()), r.multiplicity);
        }
    }
    Ok(())
}
