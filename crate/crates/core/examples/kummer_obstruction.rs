//! Why a cube root of ±π cannot exist modulo the square of the conjugate prime.

use kleinlab::quatlab::kummer_residues;

fn main() {
    let r = kummer_residues();
    println!("√-2 ≡ {} (mod 9), π ≡ {}, -π ≡ {}", r.sqrt_m2, r.image_pi, r.image_minus_pi);
    println!("cubes of units: {:?}", r.cubes);
    println!("±π times cubes: {:?}; 1 absent: {}", r.residues, r.one_absent);
}
