//! Lower exponent-p central series of F_2 against Witt's formula, and a small pc presentation.

use kleinlab::fpcore::Presentation;
use kleinlab::prop::{dk_series_and_classify, p_quotient, witt_cumulative};

fn main() -> kleinlab::Result<()> {
    let f2 = Presentation::free(2)?;
    for p in [3, 5] {
        let (ranks, label) = dk_series_and_classify(&f2, p, 5)?;
        let witt: Vec<u64> = (1..=5).map(witt_cumulative).collect::<kleinlab::Result<_>>()?;
        println!("p={p}: d = {:?} ({label}); Witt: {witt:?}", ranks.d);
    }
    let z3 = Presentation::from_letters(3, &["abAB", "acAC", "bcBC"])?;
    println!("Z^3, p=3: {:?}", dk_series_and_classify(&z3, 3, 5)?);
    let (g, r) = p_quotient(&f2, 3, 2)?;
    println!("class-2 quotient of F_2 at p=3, d = {:?}:\n{g}", r.d);
    Ok(())
}
