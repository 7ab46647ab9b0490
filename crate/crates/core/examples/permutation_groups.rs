//! Group orders by Schreier–Sims, and the P^1 action of PSL_2(F_q).

use kleinlab::finfield::{p1_action, FqCtx, Mat2};
use kleinlab::fpcore::{schreier_sims_order, Permutation};

fn main() -> kleinlab::Result<()> {
    let s5 = [Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]])?, Permutation::from_cycles(5, &[&[0, 1]])?];
    println!("|<(0 1 2 3 4), (0 1)>| = {}", schreier_sims_order(&s5)?);
    for q in [5u64, 7, 11, 13] {
        let f = FqCtx::new(q, 1)?;
        let gens = [Mat2::from_ints(&f, [[1, 1], [0, 1]]), Mat2::from_ints(&f, [[0, -1], [1, 0]])];
        let perms = gens.iter().map(|g| p1_action(&f, g)).collect::<kleinlab::Result<Vec<_>>>()?;
        println!("|PSL_2(F_{q})| on P^1 = {}", schreier_sims_order(&perms)?);
    }
    Ok(())
}
