//! Epimorphisms of a twist-knot orbifold group onto PSL_2(F_q) and the β_1 proxy of each Γ_0 cover.
//!
//! `cargo run --example twist_covers -- 4 4 23`

use kleinlab::twistknot::{cover_betti, enumerate_epimorphisms, twist_presentation, EpiOptions, OrbifoldSpec, DEFAULT_PROXY_PRIME};

fn main() -> kleinlab::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (n, k, q) = match args[..] {
        [n, k, q] => (n as i32, k as u32, q as u64),
        _ => (4, 4, 23),
    };
    let spec = OrbifoldSpec::new(n, k)?;
    println!("presentation of T({n},{k}):\n{}", twist_presentation(&spec).to_text());
    for epi in enumerate_epimorphisms(&spec, q, &EpiOptions::default())? {
        let cover = cover_betti(&epi, DEFAULT_PROXY_PRIME)?;
        println!(
            "q={q} key={} x={:?} y={:?} semisimple={} a-order={} betti_proxy={}",
            epi.canonical_key,
            epi.x.coeffs(),
            epi.y.coeffs(),
            epi.semisimple,
            epi.a_order,
            cover.betti_proxy
        );
    }
    Ok(())
}
