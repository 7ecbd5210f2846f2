//! Closed-form spectral zeta `sum 1/E_n` against the summed numerical spectrum.

use ptsym::closed_forms::{zeta_closed, zeta_closed_with, ZetaInput, ZetaPrefactor};
use ptsym::spectral::zeta_numeric;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>5} {:>14} {:>14} {:>14} {:>10}", "eps", "closed", "alternate", "numeric", "rel diff");
    for eps in [0.5, 1.0, 1.5] {
        let closed = zeta_closed(eps)?;
        let alt = zeta_closed_with(ZetaInput::new(eps)?, ZetaPrefactor::Alternate)?;
        let num = zeta_numeric(eps, 400)?;
        println!("{eps:>5} {closed:>14.9} {alt:>14.9} {:>14.9} {:>10.2e}", num.value, (num.value - closed).abs() / closed);
    }
    Ok(())
}
