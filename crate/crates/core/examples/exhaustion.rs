//! Hypotheses for exhausting a manifold by rational homology spheres.

use kleinlab::fpcore::Presentation;
use kleinlab::prop::exhaustion_check;
use kleinlab::quatlab::base_presentation;

fn main() -> kleinlab::Result<()> {
    let cases = [("<a | a^5>", Presentation::from_letters(1, &["aaaaa"])?), ("base orbifold", base_presentation())];
    for (name, g) in cases {
        let v = exhaustion_check(&g, 3, 1, None)?;
        println!("{name}: {:?}", v.conclusion);
        for (h, ok) in &v.hypotheses {
            println!("  {h:<11} {ok}");
        }
        for w in &v.witnesses {
            println!("  - {w}");
        }
    }
    Ok(())
}
