//! Powerful p-groups from pc presentations, and the p-powerful test for presentations.

use kleinlab::fpcore::Presentation;
use kleinlab::prop::{is_p_powerful, is_powerful, PcGroup};

fn main() -> kleinlab::Result<()> {
    let groups = [
        ("Z/9", "pc 3 2\npow 1 = 2\n"),
        ("Z/3 x Z/9", "pc 3 3\nweights 1 1 2\npow 2 = 3\n"),
        ("extraspecial 3^3, exponent 3", "pc 3 3\nweights 1 1 2\ncomm 2 1 = 3\n"),
        ("metacyclic a^9, b^3, [b,a] = a^3", "pc 3 3\nweights 1 1 2\npow 1 = 3\ncomm 2 1 = 3\n"),
    ];
    for (name, text) in groups {
        let g = PcGroup::parse(text)?;
        println!("{name:<34} consistent={} powerful={}", g.is_consistent(), is_powerful(&g));
    }
    let z2 = Presentation::from_letters(2, &["abAB"])?;
    let f2 = Presentation::free(2)?;
    println!("Z^2 is 5-powerful: {}", is_p_powerful(&z2, 5)?);
    println!("F_2 is 5-powerful: {}", is_p_powerful(&f2, 5)?);
    Ok(())
}
