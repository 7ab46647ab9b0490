//! Residues of `±π` modulo cubes in `O_K / π̄^2 ≅ Z/9`.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KummerReport {
    /// Image of `√-2` in `Z/9`.
    pub sqrt_m2: u64,
    pub image_pi: u64,
    pub image_minus_pi: u64,
    /// Cubes of `(Z/9)^×`.
    pub cubes: Vec<u64>,
    /// `{±π · c^3}`.
    pub residues: Vec<u64>,
    pub one_absent: bool,
}

pub fn kummer_residues() -> KummerReport {
    // √-2 ≡ -1 mod π̄ = 1 + √-2, i.e. r ≡ 2 mod 3
    let sqrt_m2 = (0..9u64).find(|r| (r * r + 2) % 9 == 0 && r % 3 == 2).expect("-2 is a square mod 9");
    let image_pi = (1 + 9 - sqrt_m2) % 9;
    let image_minus_pi = (9 - image_pi) % 9;
    let units: Vec<u64> = (1..9).filter(|c| c % 3 != 0).collect();
    let mut cubes: Vec<u64> = units.iter().map(|c| c * c * c % 9).collect();
    cubes.sort_unstable();
    cubes.dedup();
    let mut residues: Vec<u64> =
        [image_pi, image_minus_pi].iter().flat_map(|&s| cubes.iter().map(move |c| s * c % 9)).collect();
    residues.sort_unstable();
    residues.dedup();
    let one_absent = !residues.contains(&1);
    KummerReport { sqrt_m2, image_pi, image_minus_pi, cubes, residues, one_absent }
}
