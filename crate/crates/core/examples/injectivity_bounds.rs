//! Trace floors and injectivity-radius lower bounds for the level-π^n covers.

use kleinlab::quatlab::injrad_lower_bound;

fn main() {
    println!("n  trace_floor  injrad_bound");
    for n in 1..=16 {
        let b = injrad_lower_bound(n);
        println!("{n:<2} {:>11.4} {:>13.4}", b.trace_floor, b.injrad_bound);
    }
}
