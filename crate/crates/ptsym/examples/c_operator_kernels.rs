//! Perturbative C operators and their algebraic identities.

use ptsym::c_operator::build_c;
use ptsym::perturbation::ModelId;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (model, order) in [(ModelId::Ix3, 2), (ModelId::Ix2y, 1), (ModelId::Ixyz, 1)] {
        let c = build_c(model, order)?;
        let squared = c.compose_c()?;
        println!("{} order {order}: C = {}", model.name(), c.to_text());
        println!(
            "  C^2 = 1 through order: {}  [C,PT] = 0: {}  CP = (CP)^*: {}",
            squared.iter().skip(1).all(|t| t.is_zero()),
            c.commutes_with_pt(),
            c.cp_pc_relation()
        );
    }
    Ok(())
}
