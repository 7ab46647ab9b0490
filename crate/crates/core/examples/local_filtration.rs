//! Unit filtration of the local division algebra at the ramified prime over 3.

use kleinlab::quatlab::local_layer_orders;

fn main() -> kleinlab::Result<()> {
    let n_max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let r = local_layer_orders(n_max)?;
    println!("truncation: mod 3^{}", r.level);
    println!("norm ±1 units mod Q: order {}", r.unit_image_order);
    for (n, order) in r.layers.iter().enumerate() {
        println!("(1+Q^{0})/(1+Q^{1}): order {order}", n + 1, n + 2);
    }
    Ok(())
}
