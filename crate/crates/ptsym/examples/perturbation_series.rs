//! Exact perturbative eigenstates of the cubic couplings.

use ptsym::algebra::MultiIndex;
use ptsym::perturbation::{first_order_state, pt_normalize, second_order_state_ix3, ModelId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 0..4 {
        let st = second_order_state_ix3(n)?;
        let norm = pt_normalize(&st)?;
        println!("ix3 n={n}: B = {}, a2 = {}", st.b.as_ref().unwrap(), norm.eps2.unwrap());
    }
    let st = first_order_state(ModelId::Ix2y, &MultiIndex::new(&[1, 2]))?;
    println!("ix2y (1,2) first order: {}", serde_json::to_string(&st.to_json()["iP"])?);
    let st = first_order_state(ModelId::Ixyz, &MultiIndex::new(&[1, 0, 1]))?;
    println!("ixyz (1,0,1) first order: {}", serde_json::to_string(&st.to_json()["iP"])?);
    Ok(())
}
