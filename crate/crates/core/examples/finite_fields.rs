//! F_q arithmetic and traces of elements of prescribed order in PSL_2(F_q).

use kleinlab::finfield::{order_k_traces, FqCtx};

fn main() -> kleinlab::Result<()> {
    let f = FqCtx::new(3, 2)?;
    println!("F_9 modulus {:?}, generator order {}", f.modulus(), f.element_order(&f.primitive_element())?);
    for (q, p, m) in [(7u64, 7u64, 1usize), (9, 3, 2), (23, 23, 1)] {
        let f = FqCtx::new(p, m)?;
        let traces = order_k_traces(&f, 4, true)?;
        let xs: Vec<_> = traces.iter().map(|(x, _)| f.index(x)).collect();
        println!("q={q}: traces of order-4 elements (as indices) {xs:?}");
    }
    Ok(())
}
