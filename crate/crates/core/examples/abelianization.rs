//! Smith normal form of presentation relation matrices.

use kleinlab::fpcore::{abelianization, mod_p_rank_h1, Presentation};
use kleinlab::quatlab::base_presentation;

fn main() -> kleinlab::Result<()> {
    let groups = [
        ("Z^2", Presentation::from_letters(2, &["abAB"])?),
        ("Z/6", Presentation::from_letters(1, &["aaaaaa"])?),
        ("trefoil", Presentation::from_letters(2, &["abaBAB"])?),
        ("quaternion orbifold", base_presentation()),
    ];
    for (name, g) in &groups {
        let h = abelianization(g);
        let torsion: Vec<String> = h.torsion.iter().map(|d| d.to_string()).collect();
        println!("{name:<20} betti={} torsion=[{}] dim H1(F_2)={}", h.betti, torsion.join(","), mod_p_rank_h1(g, 2)?);
    }
    Ok(())
}
