//! The maximal order of (-1,-3 / Q(√-2)), its four unit generators, and the
//! seven relators of the base presentation evaluated exactly.

use kleinlab::quatlab::{numeric_embedding_check, unit_generators, verify_order_closure, verify_presentation_units};

fn main() -> kleinlab::Result<()> {
    let closure = verify_order_closure();
    println!("order basis closed under products: {}", closure.closed);
    for (name, g) in ["u", "v", "x", "y"].iter().zip(unit_generators()) {
        println!("{name} = {g}   n = {}", g.reduced_norm());
    }
    let units = verify_presentation_units()?;
    for r in &units.relators {
        println!("{:<14} -> {:?}", r.relator, r.sign);
    }
    let emb = numeric_embedding_check(1e-10)?;
    println!("complex embedding within 1e-10: {}", emb.ok);
    Ok(())
}
