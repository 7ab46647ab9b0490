//! Volume of the base orbifold from truncated zeta and L-series.
//!
//! `cargo run --example volume_constant -- 10000000`

use kleinlab::quatlab::{volume_constant, zeta_k2_ideal_count};

fn main() -> kleinlab::Result<()> {
    let terms = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000_000);
    let r = volume_constant(terms)?;
    println!("zeta(2)        = {:.16}", r.zeta2);
    println!("L(2, chi_-8)   = {:.16}", r.l2_chi);
    println!("zeta_K(2)      = {:.16}", r.zeta_k2);
    println!("vol(M_0)       = {:.16}  (+- {:.1e})", r.volume, r.error_bound);
    println!("vol(M_0')      = {:.16}", r.volume_prime);
    println!("ideal-count zeta_K(2), norms <= 10^5: {:.10}", zeta_k2_ideal_count(100_000));
    Ok(())
}
